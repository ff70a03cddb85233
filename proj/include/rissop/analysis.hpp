#pragma once

// Secrecy outage probability (SOP) evaluators.
//
//   SOP = Pr( ln(1 + gamma_d) - ln(1 + gamma_e) < C_th )
//       = int_0^inf F_gamma_d((1 + x) phi - 1) f_gamma_e(x) dx,   phi = e^C_th.
//
// Replacing F_gamma_d by F_gamma_d1 gives an upper bound with a closed form
// 1 - (I1 + I2)/2. At high SNR and small C_th the bound collapses to a
// simple expression in k = srd / (sre + se/N), N and x = 2^-b.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "rissop/channel.hpp"
#include "rissop/distributions.hpp"
#include "rissop/numerics.hpp"

namespace rissop {

enum class SopMethod { ClosedFormBound, ExactNumeric, AsymptoticGeneral, AsymptoticContinuous, AsymptoticBinary, MonteCarlo };

inline const char* to_string(SopMethod m)
{
    switch (m) {
    case SopMethod::ClosedFormBound: return "closed_form_bound";
    case SopMethod::ExactNumeric: return "exact_numeric";
    case SopMethod::AsymptoticGeneral: return "asymptotic_general";
    case SopMethod::AsymptoticContinuous: return "asymptotic_continuous";
    case SopMethod::AsymptoticBinary: return "asymptotic_binary";
    case SopMethod::MonteCarlo: return "monte_carlo";
    }
    return "unknown";
}

struct SopEstimate {
    double value;
    SopMethod method;
    std::optional<double> uncertainty;
};

// ---------------------------------------------------------------------------
// Closed-form upper bound
// ---------------------------------------------------------------------------

struct BoundIntermediates {
    double varphi; // e^C_th
    double A;      // beta^2 phi / (4 (beta^2 eps + phi))
    double B;      // 2 alpha / beta^2
};

inline BoundIntermediates bound_intermediates(const LegitSnrStats& legit, const EveSnrStats& eve, double c_th)
{
    const double phi = std::exp(c_th);
    const double b2 = legit.beta * legit.beta;
    return {phi, b2 * phi / (4.0 * (b2 * eve.epsilon + phi)), 2.0 * legit.alpha / b2};
}

inline BoundIntermediates bound_intermediates(const SystemConfig& cfg)
{
    return bound_intermediates(legit_stats(cfg), eve_stats(cfg), cfg.c_th);
}

/// The two integrals I1, I2 plus the exponential-times-erfc terms they share.
struct BoundTerms {
    double i1;
    double i2;
    double tail1;        // (2 sqrt(A)/beta) e^E erfc( B sqrt(A) + s/(2 sqrt(A)))
    double tail2;        // (2 sqrt(A)/beta) e^E erfc(-B sqrt(A) + s/(2 sqrt(A)))
    double erfc_plus;    // erfc((alpha + s)/beta)
    double erfc_minus;   // erfc((alpha - s)/beta)
};

/// The exponential factors are merged in the log domain:
/// E = A B^2 + (phi-1) eps/phi - alpha^2/beta^2 = -alpha^2 eps/(beta^2 eps + phi) + (phi-1) eps/phi,
/// and exp(E) erfc(u) = exp(E - u^2) erfcx(u), so nothing overflows however large A B^2 gets.
inline BoundTerms bound_terms(const LegitSnrStats& legit, const EveSnrStats& eve, double c_th)
{
    const auto [phi, A, B] = bound_intermediates(legit, eve, c_th);
    const double alpha = legit.alpha;
    const double beta = legit.beta;
    const double eps = eve.epsilon;
    const double phi_minus_1 = std::expm1(c_th);
    const double s = std::sqrt(phi_minus_1);
    const double root_a = std::sqrt(A);

    const double exponent = -alpha * alpha * eps / (beta * beta * eps + phi) + phi_minus_1 * eps / phi;
    const double log_prefactor = std::log(2.0 * root_a / beta) + exponent;
    const double shift = s / (2.0 * root_a);
    const double tail1 = std::exp(log_prefactor + numerics::log_erfc(B * root_a + shift));
    const double tail2 = std::exp(log_prefactor + numerics::log_erfc(-B * root_a + shift));

    BoundTerms t{};
    t.tail1 = tail1;
    t.tail2 = tail2;
    t.erfc_plus = numerics::erfc((alpha + s) / beta);
    t.erfc_minus = numerics::erfc((alpha - s) / beta);
    t.i1 = t.erfc_plus - tail1;
    t.i2 = numerics::erfc((s - alpha) / beta) - tail2;
    return t;
}

inline BoundTerms bound_terms(const SystemConfig& cfg) { return bound_terms(legit_stats(cfg), eve_stats(cfg), cfg.c_th); }

/// 1 - (I1 + I2)/2, evaluated as
/// [erfc((alpha - s)/beta) - erfc((alpha + s)/beta) + tail1 + tail2] / 2
/// which has no cancellation against 1 when the SOP is small.
inline SopEstimate sop_bound_closed_form(const SystemConfig& cfg)
{
    const auto t = bound_terms(cfg);
    const double value = 0.5 * (t.erfc_minus - t.erfc_plus + t.tail1 + t.tail2);
    return {detail::clamp_probability(value), SopMethod::ClosedFormBound, std::nullopt};
}

/// Limit of the closed-form bound as C_th -> 0.
inline double sop_bound_phi_limit(const SystemConfig& cfg)
{
    const auto legit = legit_stats(cfg);
    const auto eve = eve_stats(cfg);
    const double q = 2.0 * legit.sigma1_sq * cfg.gamma_srd_bar * eve.epsilon;
    return std::sqrt(1.0 / (q + 1.0)) *
           std::exp(-legit.m1 * legit.m1 * cfg.gamma_srd_bar * eve.epsilon / (q + 1.0));
}

// ---------------------------------------------------------------------------
// Exact numeric SOP under the large-N laws
// ---------------------------------------------------------------------------

struct ExactOptions {
    numerics::QuadratureOptions outer{1e-8, 1e-15, 400'000};
    numerics::QuadratureOptions inner{1e-10, 1e-17, 400'000};
};

/// Integrates F_gamma_d((1 + x) phi - 1) against the exponential law of
/// gamma_e, after w = eps x. Throws numerics::AccuracyError on failure.
inline SopEstimate sop_exact_numeric(const SystemConfig& cfg, const ExactOptions& opt = {})
{
    const auto legit = legit_stats(cfg);
    const double eps = eve_stats(cfg).epsilon;
    const double phi = std::exp(cfg.c_th);
    const double phi_minus_1 = std::expm1(cfg.c_th);
    auto integrand = [&](double w) {
        const double z = phi_minus_1 + phi * w / eps;
        return cdf_gamma_d_exact(z, legit, opt.inner) * std::exp(-w);
    };
    const auto r = numerics::integrate_adaptive(integrand, 0.0, std::numeric_limits<double>::infinity(), opt.outer);
    return {detail::clamp_probability(r.value), SopMethod::ExactNumeric, r.abs_error_estimate};
}

// ---------------------------------------------------------------------------
// High-SNR asymptotics
// ---------------------------------------------------------------------------

/// Effective legitimate-to-eavesdropper SNR ratio.
inline double k_factor(const SystemConfig& cfg)
{
    cfg.validate();
    return cfg.gamma_srd_bar / (cfg.gamma_sre_bar + cfg.gamma_se_bar / cfg.n_elements);
}

/// Same quantity from the geometry alone (transmit power and eta cancel).
inline double k_factor(const GeometryConfig& geo, int n_elements)
{
    geo.validate();
    if (n_elements < 1) throw ConfigError("n_elements", "must be >= 1");
    const double v = geo.upsilon;
    return std::pow(geo.d_rd, -v) / (std::pow(geo.d_re, -v) + std::pow(geo.d_se / geo.d_sr, -v) / n_elements);
}

/// General high-SNR SOP for step fraction x = 2^-b (x = 0: continuous).
inline double asymptotic_sop_general(double k, int n_elements, double x)
{
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double s1 = numerics::sinc_normalized(x);
    const double s2 = numerics::sinc_normalized(2.0 * x);
    const double spread = 1.0 + s2 - pi2 / 8.0 * s1 * s1;
    const double rate = 1.0 / (16.0 * (1.0 + s2) / (pi2 * s1 * s1) - 2.0);
    return std::sqrt(1.0 / (k * spread)) * std::exp(-rate * n_elements);
}

inline double asymptotic_sop_continuous(double k, int n_elements)
{
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    return std::sqrt(8.0 / (k * (16.0 - pi2))) * std::exp(-pi2 / (32.0 - 2.0 * pi2) * n_elements);
}

inline double asymptotic_sop_binary(double k, int n_elements)
{
    return std::sqrt(2.0 / k) * std::exp(-0.5 * n_elements);
}

inline SopEstimate asymptotic_sop(double k, int n_elements, QuantBits bits)
{
    if (bits.is_continuous()) return {asymptotic_sop_continuous(k, n_elements), SopMethod::AsymptoticContinuous, {}};
    if (bits.bits() == 1) return {asymptotic_sop_binary(k, n_elements), SopMethod::AsymptoticBinary, {}};
    return {asymptotic_sop_general(k, n_elements, bits.step_fraction()), SopMethod::AsymptoticGeneral, {}};
}

/// No regime check: the expression is evaluated wherever it is asked for.
/// The value is not clamped; far outside the high-SNR regime it can exceed 1.
inline SopEstimate sop_asymptotic(const SystemConfig& cfg)
{
    return asymptotic_sop(k_factor(cfg), cfg.n_elements, cfg.quant_bits);
}

struct AsymptoticTerms {
    double x;
    double k;
    double c1;
    double c2;
    double c3;
};

inline AsymptoticTerms asymptotic_terms(const SystemConfig& cfg)
{
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double k = k_factor(cfg);
    const double c1 = std::sqrt(8.0 / (k * (16.0 - pi2)));
    return {cfg.quant_bits.step_fraction(), k, c1, pi2 / 6.0 * c1, pi2 / (32.0 - 2.0 * pi2)};
}

/// Second-order expansion of the asymptotic SOP in x = 2^-b:
/// c1 e^{-c3 N} + c2 e^{-c3 N} x^2. The loss term is "negligible" when it is
/// below a tenth of the continuous-phase term, i.e. for b >= 3.
struct QuantizationLoss {
    double dominant;
    double loss;
    double ratio;
};

inline QuantizationLoss taylor_quantization_loss(const SystemConfig& cfg)
{
    const auto t = asymptotic_terms(cfg);
    const double base = std::exp(-t.c3 * cfg.n_elements);
    const double dominant = t.c1 * base;
    const double loss = t.c2 * base * t.x * t.x;
    return {dominant, loss, std::numbers::pi * std::numbers::pi / 6.0 * t.x * t.x};
}

/// Smallest binary-phase RIS size whose asymptotic SOP does not exceed that
/// of a continuous-phase RIS with n_continuous elements (same k).
inline int equivalent_elements_binary(int n_continuous)
{
    if (n_continuous < 1) throw std::invalid_argument("equivalent_elements_binary: n_continuous must be >= 1");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double n2 = pi2 / (16.0 - pi2) * n_continuous - std::log(4.0 / (16.0 - pi2));
    return static_cast<int>(std::ceil(n2));
}

/// Markov-inequality guarantee that gamma_d2 is small next to gamma_d1:
/// Pr(gamma_d2 / gamma_d1 < 0.1) >= 1 - 20/(N+1) for every b, and the ratio
/// of means E[gamma_d2]/E[gamma_d1] for the given b.
struct TightnessBound {
    double prob_lower_bound;
    double moment_ratio;
};

inline TightnessBound bound_tightness(int n_elements, QuantBits bits)
{
    if (n_elements < 1) throw std::invalid_argument("bound_tightness: n_elements must be >= 1");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double n = n_elements;
    const double x = bits.step_fraction();
    const double s1 = numerics::sinc_normalized(x);
    const double s2 = numerics::sinc_normalized(2.0 * x);
    const double ratio = 8.0 * numerics::one_minus_sinc(2.0 * x) / ((n - 1.0) * pi2 * s1 * s1 + 8.0 * (1.0 + s2));
    return {std::max(0.0, 1.0 - 20.0 / (n + 1.0)), ratio};
}

} // namespace rissop
