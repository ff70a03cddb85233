#pragma once

// Large-N (central-limit) laws of the received SNRs.
//
// Legitimate user: gamma_d = gamma_d1 + gamma_d2 with gamma_d1 = srd X^2,
// gamma_d2 = srd Y^2, X ~ N(m1, sigma1^2), Y ~ N(0, sigma2^2) independent.
// Eavesdropper: gamma_e ~ Exponential(epsilon).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "rissop/channel.hpp"
#include "rissop/numerics.hpp"

namespace rissop {

/// Raised when a density is requested for a point-mass law (gamma_d2 == 0
/// under continuous phase control).
class DegenerateDistributionError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Mean and variances of X and Y for N elements and the given quantizer.
struct ComponentMoments {
    double m1;
    double sigma1_sq;
    double sigma2_sq;
};

inline ComponentMoments component_moments(int n_elements, QuantBits bits)
{
    constexpr double pi = std::numbers::pi;
    const double n = n_elements;
    const double x = bits.step_fraction();
    const double s1 = numerics::sinc_normalized(x);
    const double s2 = numerics::sinc_normalized(2.0 * x);
    ComponentMoments m;
    m.m1 = n * pi / 4.0 * s1;
    m.sigma1_sq = n / 2.0 * (1.0 + s2) - n * pi * pi / 16.0 * s1 * s1;
    m.sigma2_sq = bits.is_continuous() ? 0.0 : n / 2.0 * numerics::one_minus_sinc(2.0 * x);
    return m;
}

struct LegitSnrStats {
    double m1 = 0.0;
    double sigma1_sq = 0.0;
    double sigma2_sq = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> lambda; // empty: degenerate (continuous phases)
    double mu = 0.5;

    bool degenerate() const noexcept { return !lambda.has_value(); }
};

inline LegitSnrStats legit_stats(const SystemConfig& cfg)
{
    cfg.validate();
    const auto m = component_moments(cfg.n_elements, cfg.quant_bits);
    LegitSnrStats s;
    s.m1 = m.m1;
    s.sigma1_sq = m.sigma1_sq;
    s.sigma2_sq = m.sigma2_sq;
    s.alpha = m.m1 * std::sqrt(cfg.gamma_srd_bar);
    s.beta = std::sqrt(2.0 * m.sigma1_sq * cfg.gamma_srd_bar);
    if (m.sigma2_sq > 0.0) s.lambda = 1.0 / (2.0 * m.sigma2_sq * cfg.gamma_srd_bar);
    return s;
}

struct EveSnrStats {
    double epsilon;
};

inline EveSnrStats eve_stats(const SystemConfig& cfg)
{
    cfg.validate();
    return {1.0 / (cfg.n_elements * cfg.gamma_sre_bar + cfg.gamma_se_bar)};
}

namespace detail {
inline double clamp_probability(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

inline void require_nonnegative(double x, const char* what)
{
    if (!(x >= 0.0)) throw std::domain_error(std::string(what) + ": argument must be >= 0");
}
} // namespace detail

/// CDF of gamma_d1 (non-central chi-square with one degree of freedom).
/// Written as the difference of two erfc terms so the lower tail keeps its
/// relative accuracy.
inline double cdf_gamma_d1(double x, const LegitSnrStats& s)
{
    detail::require_nonnegative(x, "cdf_gamma_d1");
    const double r = std::sqrt(x);
    const double f = 0.5 * (numerics::erfc((s.alpha - r) / s.beta) - numerics::erfc((s.alpha + r) / s.beta));
    return detail::clamp_probability(f);
}

/// Gamma(1/2, rate lambda) density of gamma_d2.
inline double pdf_gamma_d2(double y, const LegitSnrStats& s)
{
    if (s.degenerate()) {
        throw DegenerateDistributionError("pdf_gamma_d2: gamma_d2 is identically zero for continuous phases");
    }
    if (!(y > 0.0)) throw std::domain_error("pdf_gamma_d2: argument must be > 0");
    const double lam = *s.lambda;
    return std::exp(0.5 * std::log(lam) - 0.5 * std::log(y) - lam * y) / numerics::gamma_function(s.mu);
}

inline double cdf_gamma_d2(double y, const LegitSnrStats& s)
{
    detail::require_nonnegative(y, "cdf_gamma_d2");
    if (s.degenerate()) return 1.0;
    return numerics::erf(std::sqrt(*s.lambda * y));
}

/// CDF of gamma_d = gamma_d1 + gamma_d2 by numerical convolution. With
/// y = u^2 the Gamma(1/2) density becomes the bounded half-Gaussian
/// 2 sqrt(lambda/pi) exp(-lambda u^2).
inline double cdf_gamma_d_exact(double z, const LegitSnrStats& s, const numerics::QuadratureOptions& opt = {})
{
    detail::require_nonnegative(z, "cdf_gamma_d_exact");
    if (s.degenerate()) return cdf_gamma_d1(z, s);
    if (z == 0.0) return 0.0;
    const double lam = *s.lambda;
    // exp(-lambda u^2) underflows beyond this point
    const double u_max = std::min(std::sqrt(z), std::sqrt(745.0 / lam));
    const double norm = 2.0 * std::sqrt(lam / std::numbers::pi);
    auto integrand = [&](double u) {
        const double rest = std::max(z - u * u, 0.0);
        return norm * std::exp(-lam * u * u) * cdf_gamma_d1(rest, s);
    };
    return detail::clamp_probability(numerics::integrate_adaptive(integrand, 0.0, u_max, opt).value);
}

inline double pdf_gamma_e(double x, const EveSnrStats& s)
{
    detail::require_nonnegative(x, "pdf_gamma_e");
    return s.epsilon * std::exp(-s.epsilon * x);
}

inline double cdf_gamma_e(double x, const EveSnrStats& s)
{
    detail::require_nonnegative(x, "cdf_gamma_e");
    return -std::expm1(-s.epsilon * x);
}

} // namespace rissop
