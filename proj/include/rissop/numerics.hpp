#pragma once

// Special functions and adaptive quadrature shared by the analytical code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rissop::numerics {

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

inline double erf(double x) { return std::erf(x); }

/// Complementary error function. Evaluated directly (never as 1 - erf), so the
/// positive tail keeps full relative precision down to the underflow limit.
inline double erfc(double x) { return std::erfc(x); }

namespace detail {

// Laplace continued fraction for exp(x^2) erfc(x), modified Lentz. x >= 5.
inline double erfcx_continued_fraction(double x)
{
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

} // namespace detail

/// Scaled complementary error function exp(x^2) erfc(x).
inline double erfcx(double x)
{
    if (x < 0.0) {
        // overflows to +inf below about -26.6, as the true value does
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x < 5.0) return std::exp(x * x) * std::erfc(x);
    return detail::erfcx_continued_fraction(x);
}

/// log(erfc(x)) without underflow for large positive x.
inline double log_erfc(double x)
{
    if (x <= 0.0) return std::log(std::erfc(x));
    return -x * x + std::log(erfcx(x));
}

/// sin(pi x) with exact zeros at the integers.
inline double sin_pi(double x)
{
    if (x == std::nearbyint(x)) return 0.0;
    return std::sin(std::numbers::pi * x);
}

/// Normalized sinc, sin(pi x) / (pi x), equal to 1 at the origin.
inline double sinc_normalized(double x)
{
    const double ax = std::abs(x);
    if (ax == 0.0) return 1.0;
    return sin_pi(ax) / (std::numbers::pi * ax);
}

/// 1 - sinc(x), accurate for small x.
inline double one_minus_sinc(double x)
{
    const double t = std::numbers::pi * x;
    if (std::abs(t) < 1e-2) {
        const double t2 = t * t;
        return t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0));
    }
    return 1.0 - sinc_normalized(x);
}

inline double gamma_function(double x)
{
    if (!(x > 0.0)) {
        throw std::domain_error("gamma_function: argument must be positive, got " + std::to_string(x));
    }
    return std::tgamma(x);
}

// ---------------------------------------------------------------------------
// Adaptive quadrature
// ---------------------------------------------------------------------------

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    std::size_t max_evaluations = 400'000;
};

/// Thrown when the evaluation budget runs out before the tolerance is met.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, QuadratureResult best)
        : std::runtime_error(what), best_(best)
    {
    }
    const QuadratureResult& best_estimate() const noexcept { return best_; }

private:
    QuadratureResult best_;
};

namespace detail {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool refinable;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// 21-point Kronrod rule with embedded 10-point Gauss rule; QUADPACK error heuristic.
template <class F>
Segment kronrod21(const F& f, double a, double b)
{
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& xk = gauss_kronrod<double, 21>::abscissa();
    const auto& wk = gauss_kronrod<double, 21>::weights();
    const auto& wg = gauss<double, 10>::weights();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[21];
    fv[0] = f(center);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        fv[2 * i - 1] = f(center - half * xk[i]);
        fv[2 * i] = f(center + half * xk[i]);
    }

    double kron = wk[0] * fv[0];
    double gauss_sum = 0.0;
    double abs_sum = wk[0] * std::abs(fv[0]);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double pair = fv[2 * i - 1] + fv[2 * i];
        kron += wk[i] * pair;
        abs_sum += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 1) gauss_sum += wg[i / 2] * pair;
    }
    const double mean = 0.5 * kron;
    double asc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    }

    const double value = kron * half;
    const double resabs = abs_sum * std::abs(half);
    const double resasc = asc * std::abs(half);
    double err = std::abs((kron - gauss_sum) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }

    const double width_floor = 100.0 * eps * std::max(std::abs(a), std::abs(b));
    const bool refinable = (b - a) > width_floor;
    return {a, b, value, err, refinable};
}

template <class F>
QuadratureResult integrate_finite(const F& f, double a, double b, const QuadratureOptions& opt)
{
    std::priority_queue<Segment> work;
    std::vector<Segment> frozen;
    std::size_t evaluations = 21;
    work.push(kronrod21(f, a, b));

    auto totals = [&] {
        double value = 0.0;
        double error = 0.0;
        auto copy = work;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        for (const auto& s : frozen) {
            value += s.value;
            error += s.error;
        }
        return QuadratureResult{value, error, evaluations};
    };

    double value = work.top().value;
    double error = work.top().error;
    while (true) {
        if (!std::isfinite(value)) {
            throw AccuracyError("integrate_adaptive: non-finite integrand value", totals());
        }
        if (error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) break;
        if (work.empty()) break; // every segment is at the resolution floor
        if (evaluations + 42 > opt.max_evaluations) {
            throw AccuracyError("integrate_adaptive: evaluation budget exhausted", totals());
        }
        Segment worst = work.top();
        work.pop();
        if (!worst.refinable) {
            frozen.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = kronrod21(f, worst.a, mid);
        const Segment right = kronrod21(f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
        // Re-sum occasionally so the running totals do not drift.
        if (evaluations % (42 * 64) == 21) {
            const auto t = totals();
            value = t.value;
            error = t.abs_error_estimate;
        }
    }
    auto result = totals();
    if (result.abs_error_estimate > std::max(opt.abs_tol, opt.rel_tol * std::abs(result.value))) {
        throw AccuracyError("integrate_adaptive: tolerance not reached at resolution floor", result);
    }
    return result;
}

} // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b]. b may be +infinity, in
/// which case the range is mapped onto [0, 1) through x = a + t / (1 - t).
/// Integrable endpoint singularities are tolerated since no rule node sits on
/// an endpoint.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, const QuadratureOptions& opt = {})
{
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0)) {
        throw std::invalid_argument("integrate_adaptive: tolerances must be positive");
    }
    if (std::isnan(a) || std::isnan(b) || std::isinf(a)) {
        throw std::invalid_argument("integrate_adaptive: lower limit must be finite");
    }
    if (a == b) return {0.0, 0.0, 1};
    if (b < a) {
        auto r = integrate_adaptive(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    if (std::isinf(b)) {
        auto mapped = [&f, a](double t) {
            const double s = 1.0 - t;
            const double fx = f(a + t / s);
            return fx == 0.0 ? 0.0 : fx / (s * s);
        };
        return detail::integrate_finite(mapped, 0.0, 1.0, opt);
    }
    return detail::integrate_finite(f, a, b, opt);
}

template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double rel_tol, double abs_tol)
{
    QuadratureOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = abs_tol;
    return integrate_adaptive(f, a, b, opt);
}

} // namespace rissop::numerics
