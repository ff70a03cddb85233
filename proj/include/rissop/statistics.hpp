#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace rissop {

/// Streaming central moments up to fourth order. Partial accumulators merge
/// exactly (pairwise update formulas), so a fixed merge order gives
/// bit-identical results however the samples were split.
class RunningMoments {
public:
    void add(double x) noexcept
    {
        RunningMoments one;
        one.n_ = 1;
        one.mean_ = x;
        merge(one);
    }

    void merge(const RunningMoments& o) noexcept
    {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double d = o.mean_ - mean_;
        const double d_n = d / n;
        const double d2 = d * d;
        const double m2 = m2_ + o.m2_ + d2 * na * nb / n;
        const double m3 = m3_ + o.m3_ + d2 * d * na * nb * (na - nb) / (n * n) + 3.0 * d_n * (na * o.m2_ - nb * m2_);
        const double m4 = m4_ + o.m4_ + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n * n * n) +
                          6.0 * d2 * (na * na * o.m2_ + nb * nb * m2_) / (n * n) +
                          4.0 * d_n * (na * o.m3_ - nb * m3_);
        mean_ += d * nb / n;
        m2_ = m2;
        m3_ = m3;
        m4_ = m4;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance.
    double variance() const noexcept { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double mean_standard_error() const noexcept
    {
        return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    /// Large-sample standard error of the sample variance, sqrt((mu4 - sigma^4)/n).
    double variance_standard_error() const noexcept
    {
        if (n_ < 2) return 0.0;
        const double n = static_cast<double>(n_);
        const double mu2 = m2_ / n;
        const double mu4 = m4_ / n;
        return std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / n);
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

/// Streaming sample covariance/correlation of a pair.
class RunningCovariance {
public:
    void add(double x, double y) noexcept
    {
        RunningCovariance one;
        one.n_ = 1;
        one.mx_ = x;
        one.my_ = y;
        merge(one);
    }

    void merge(const RunningCovariance& o) noexcept
    {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(o.n_);
        const double n = na + nb;
        const double dx = o.mx_ - mx_;
        const double dy = o.my_ - my_;
        cxx_ += o.cxx_ + dx * dx * na * nb / n;
        cyy_ += o.cyy_ + dy * dy * na * nb / n;
        cxy_ += o.cxy_ + dx * dy * na * nb / n;
        mx_ += dx * nb / n;
        my_ += dy * nb / n;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    double correlation() const noexcept
    {
        const double denom = std::sqrt(cxx_ * cyy_);
        return denom > 0.0 ? cxy_ / denom : 0.0;
    }
    /// Approximate standard error (1 - r^2)/sqrt(n - 1).
    double correlation_standard_error() const noexcept
    {
        if (n_ < 2) return 0.0;
        const double r = correlation();
        return (1.0 - r * r) / std::sqrt(static_cast<double>(n_ - 1));
    }

private:
    std::uint64_t n_ = 0;
    double mx_ = 0.0;
    double my_ = 0.0;
    double cxx_ = 0.0;
    double cyy_ = 0.0;
    double cxy_ = 0.0;
};

struct BinomialInterval {
    double lower;
    double upper;
    double half_width; // max distance from the point estimate to either end
    bool exact;        // Clopper-Pearson rather than the normal approximation
};

/// Two-sided confidence interval for a binomial proportion: normal
/// approximation, or Clopper-Pearson when fewer than 30 successes or
/// failures were observed.
inline BinomialInterval binomial_interval(std::uint64_t successes, std::uint64_t trials, double level)
{
    if (trials == 0) throw std::invalid_argument("binomial_interval: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("binomial_interval: successes exceed trials");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("binomial_interval: level must lie in (0, 1)");
    const double n = static_cast<double>(trials);
    const double k = static_cast<double>(successes);
    const double p = k / n;
    const double alpha = 1.0 - level;

    if (successes >= 30 && trials - successes >= 30) {
        const double z = boost::math::quantile(boost::math::normal{}, 1.0 - alpha / 2.0);
        const double hw = z * std::sqrt(p * (1.0 - p) / n);
        return {std::max(0.0, p - hw), std::min(1.0, p + hw), hw, false};
    }
    const double lower = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
    const double upper = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return {lower, upper, std::max(p - lower, upper - p), true};
}

} // namespace rissop
