#pragma once

// Scenario configuration, fading-channel sampling, nearest-point phase
// quantization and the instantaneous SNRs at the legitimate user (D) and the
// eavesdropper (E) of an RIS-assisted wiretap link.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rissop/philox.hpp"

namespace rissop {

using cplx = std::complex<double>;

/// Invalid configuration value; the message names the offending field.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

/// Number of phase quantization bits, or continuous (unquantized) control.
class QuantBits {
public:
    static constexpr int kMaxBits = 30;

    static QuantBits continuous() noexcept { return QuantBits{0}; }
    static QuantBits finite(int bits)
    {
        if (bits < 1 || bits > kMaxBits) {
            throw ConfigError("quant_bits", "must be in [1, " + std::to_string(kMaxBits) + "] or continuous, got " +
                                                std::to_string(bits));
        }
        return QuantBits{bits};
    }
    /// Accepts an integer or one of "inf", "continuous".
    static QuantBits parse(std::string_view text)
    {
        if (text == "inf" || text == "continuous" || text == "Continuous" || text == "+inf") return continuous();
        int value = 0;
        std::size_t used = 0;
        try {
            value = std::stoi(std::string(text), &used);
        } catch (const std::exception&) {
            throw ConfigError("quant_bits", "expected an integer or 'inf', got '" + std::string(text) + "'");
        }
        if (used != text.size()) {
            throw ConfigError("quant_bits", "expected an integer or 'inf', got '" + std::string(text) + "'");
        }
        return finite(value);
    }

    bool is_continuous() const noexcept { return bits_ == 0; }
    int bits() const
    {
        if (is_continuous()) throw std::logic_error("QuantBits::bits() on continuous phase control");
        return bits_;
    }
    /// 2^b phase levels; 0 for continuous.
    std::uint64_t levels() const noexcept { return is_continuous() ? 0 : (std::uint64_t{1} << bits_); }
    /// x = 2^-b, the half-width of the quantization error in units of pi; 0 for continuous.
    double step_fraction() const noexcept { return is_continuous() ? 0.0 : std::ldexp(1.0, -bits_); }
    std::string to_string() const { return is_continuous() ? "inf" : std::to_string(bits_); }

    friend bool operator==(QuantBits, QuantBits) = default;

private:
    explicit QuantBits(int bits) noexcept : bits_(bits) {}
    int bits_;
};

/// One scenario. SNRs are linear; the target secrecy rate is in nats.
struct SystemConfig {
    int n_elements = 30;
    QuantBits quant_bits = QuantBits::continuous();
    double gamma_srd_bar = 1.0;
    double gamma_sre_bar = 1.0;
    double gamma_se_bar = 1.0;
    double c_th = 0.0;

    void validate() const
    {
        if (n_elements < 1) throw ConfigError("n_elements", "must be >= 1");
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name, "must be positive and finite");
        };
        positive(gamma_srd_bar, "gamma_srd_bar");
        positive(gamma_sre_bar, "gamma_sre_bar");
        positive(gamma_se_bar, "gamma_se_bar");
        if (!(c_th >= 0.0) || !std::isfinite(c_th)) throw ConfigError("c_th", "must be finite and >= 0");
    }
};

struct GeometryConfig {
    double d_sr = 1.0;
    double d_rd = 1.0;
    double d_re = 1.0;
    double d_se = 1.0;
    double upsilon = 2.0; // path-loss exponent
    double eta = 1.0;     // RIS amplitude reflection coefficient
    double tx_snr = 1.0;  // P / N0, linear

    void validate() const
    {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name, "must be positive and finite");
        };
        positive(d_sr, "d_sr");
        positive(d_rd, "d_rd");
        positive(d_re, "d_re");
        positive(d_se, "d_se");
        positive(upsilon, "path_loss_exponent");
        positive(tx_snr, "tx_snr");
        if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta", "must lie in (0, 1]");
    }
};

struct AverageSnrs {
    double gamma_srd_bar;
    double gamma_sre_bar;
    double gamma_se_bar;
};

/// Average link SNRs from distances. The direct S-E link carries the eta^2
/// factor as well, matching how the model defines it.
inline AverageSnrs snrs_from_geometry(const GeometryConfig& geo)
{
    geo.validate();
    const double gain = geo.eta * geo.eta * geo.tx_snr;
    const double sr = std::pow(geo.d_sr, -geo.upsilon);
    return {gain * sr * std::pow(geo.d_rd, -geo.upsilon), gain * sr * std::pow(geo.d_re, -geo.upsilon),
            gain * std::pow(geo.d_se, -geo.upsilon)};
}

/// Fading coefficients of one channel draw: S-RIS (h), RIS-D (g), RIS-E (p), S-E.
struct ChannelRealization {
    std::vector<cplx> h;
    std::vector<cplx> g;
    std::vector<cplx> p;
    cplx h_se{0.0, 0.0};

    std::size_t size() const noexcept { return h.size(); }
};

// Block layout of a trial stream: element i uses blocks 3i (h), 3i+1 (g) and
// 3i+2 (p); the S-E coefficient uses block 3N.
namespace stream_layout {
constexpr std::uint64_t h(std::size_t i) noexcept { return 3 * std::uint64_t{i}; }
constexpr std::uint64_t g(std::size_t i) noexcept { return 3 * std::uint64_t{i} + 1; }
constexpr std::uint64_t p(std::size_t i) noexcept { return 3 * std::uint64_t{i} + 2; }
constexpr std::uint64_t h_se(std::size_t n) noexcept { return 3 * std::uint64_t{n}; }
} // namespace stream_layout

/// Every coefficient i.i.d. CN(0, 1).
inline ChannelRealization sample_channels(const SystemConfig& cfg, const TrialStream& stream)
{
    const auto n = static_cast<std::size_t>(cfg.n_elements);
    ChannelRealization ch;
    ch.h.resize(n);
    ch.g.resize(n);
    ch.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ch.h[i] = stream.complex_normal(stream_layout::h(i));
        ch.g[i] = stream.complex_normal(stream_layout::g(i));
        ch.p[i] = stream.complex_normal(stream_layout::p(i));
    }
    ch.h_se = stream.complex_normal(stream_layout::h_se(n));
    return ch;
}

/// Wraps an angle into [-pi, pi].
inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

/// Phase that co-phases h*g, -arg(h g), in [0, 2 pi).
inline double optimal_phase(cplx h, cplx g)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double phi = -std::arg(h * g);
    if (phi < 0.0) phi += two_pi;
    if (phi >= two_pi) phi = 0.0;
    return phi;
}

struct QuantizedPhase {
    double phase; // member of {0, 2pi/2^b, ...}
    double error; // wrapped phase - target, within [-pi 2^-b, pi 2^-b]
};

/// Nearest member of the 2^b-point phase alphabet in circular distance.
/// Exact midpoints resolve to the smaller phase value.
inline QuantizedPhase quantize_phase(double target, QuantBits bits)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (bits.is_continuous()) return {target, 0.0};
    const double target_wrapped = target - two_pi * std::floor(target / two_pi);
    const auto levels = static_cast<double>(bits.levels());
    const double step = two_pi / levels;
    const double t = target_wrapped / step;
    double index = std::ceil(t - 0.5);
    if (index >= levels || t == levels - 0.5) index = 0.0;
    const double phase = index * step;
    return {phase, wrap_angle(phase - target_wrapped)};
}

struct PhaseVector {
    std::vector<double> phases;
    std::vector<double> quant_errors;
};

inline PhaseVector quantize_phases(const ChannelRealization& ch, QuantBits bits)
{
    PhaseVector pv;
    pv.phases.reserve(ch.size());
    pv.quant_errors.reserve(ch.size());
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const auto q = quantize_phase(optimal_phase(ch.h[i], ch.g[i]), bits);
        pv.phases.push_back(q.phase);
        pv.quant_errors.push_back(q.error);
    }
    return pv;
}

/// Legitimate-user SNR with its in-phase/quadrature decomposition
/// gamma_d = gamma_srd (X^2 + Y^2) = gamma_d1 + gamma_d2.
struct LegitSnr {
    double gamma_d;
    double x;
    double y;
    double gamma_d1;
    double gamma_d2;
};

inline void check_dimensions(const ChannelRealization& ch, const PhaseVector& pv)
{
    const auto n = ch.h.size();
    if (ch.g.size() != n || ch.p.size() != n || pv.phases.size() != n || pv.quant_errors.size() != n) {
        throw std::invalid_argument("channel realization and phase vector sizes differ");
    }
}

/// gamma_d is evaluated from the complex coherent sum; X and Y independently
/// from |h||g| and the quantization errors.
inline LegitSnr snr_legitimate(const ChannelRealization& ch, const PhaseVector& pv, const SystemConfig& cfg)
{
    check_dimensions(ch, pv);
    cplx sum{0.0, 0.0};
    double x = 0.0;
    double y = 0.0;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        sum += ch.h[i] * ch.g[i] * std::polar(1.0, pv.phases[i]);
        const double amp = std::abs(ch.h[i]) * std::abs(ch.g[i]);
        x += amp * std::cos(pv.quant_errors[i]);
        y += amp * std::sin(pv.quant_errors[i]);
    }
    const double srd = cfg.gamma_srd_bar;
    return {srd * std::norm(sum), x, y, srd * x * x, srd * y * y};
}

/// Complex baseband amplitude Z at the eavesdropper; gamma_e = |Z|^2.
inline cplx eavesdropper_amplitude(const ChannelRealization& ch, const PhaseVector& pv, const SystemConfig& cfg)
{
    check_dimensions(ch, pv);
    cplx sum{0.0, 0.0};
    for (std::size_t i = 0; i < ch.size(); ++i) sum += ch.h[i] * ch.p[i] * std::polar(1.0, pv.phases[i]);
    return std::sqrt(cfg.gamma_sre_bar) * sum + std::sqrt(cfg.gamma_se_bar) * ch.h_se;
}

inline double snr_eavesdropper(const ChannelRealization& ch, const PhaseVector& pv, const SystemConfig& cfg)
{
    return std::norm(eavesdropper_amplitude(ch, pv, cfg));
}

} // namespace rissop
