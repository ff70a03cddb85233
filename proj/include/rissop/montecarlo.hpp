#pragma once

// Parallel, reproducible Monte-Carlo estimation.
//
// Trial t draws every coefficient from TrialStream(master_seed, t), and work
// is split into fixed-size chunks whose partial results are merged in chunk
// order. Results therefore depend on (master_seed, trials) only, never on
// the number of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <ostream>
#include <span>
#include <thread>
#include <vector>

#include "rissop/channel.hpp"
#include "rissop/philox.hpp"
#include "rissop/statistics.hpp"

namespace rissop {

struct McConfig {
    std::uint64_t trials = 1'000'000;
    std::uint64_t master_seed = 0x5EED'2023'0001ull;
    int workers = 1;
    double confidence_level = 0.95;

    void validate() const
    {
        if (trials < 1) throw ConfigError("trials", "must be >= 1");
        if (workers < 1) throw ConfigError("workers", "must be >= 1");
        if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
            throw ConfigError("confidence_level", "must lie in (0, 1)");
        }
    }
};

struct McSopResult {
    double sop_hat = 0.0;
    double ci_half_width = 0.0;
    std::uint64_t outage_count = 0;
    std::uint64_t trials = 0;
    double elapsed_seconds = 0.0;
};

/// Per-trial quantities; gamma_d == gamma_d1 + gamma_d2 up to rounding.
struct TrialRecord {
    double gamma_d;
    double gamma_e;
    double x_component;
    double y_component;
    double gamma_d1;
    double gamma_d2;
};

namespace mc_detail {

inline constexpr std::uint64_t kChunkTrials = 4096;

/// Coherent sum S = sum h_i g_i e^{j phi_i} (so X = Re S, Y = Im S) and the
/// eavesdropper amplitude Z of one trial.
struct TrialSums {
    cplx s;
    cplx z;
};

inline TrialSums simulate_trial(const SystemConfig& cfg, const TrialStream& stream, bool with_eavesdropper)
{
    const auto n = static_cast<std::size_t>(cfg.n_elements);
    const bool continuous = cfg.quant_bits.is_continuous();
    double s_re = 0.0;
    double s_im = 0.0;
    cplx eve{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx h = stream.complex_normal(stream_layout::h(i));
        const cplx g = stream.complex_normal(stream_layout::g(i));
        const cplx hg = h * g;
        cplx rotation;
        if (continuous) {
            const double mag = std::abs(hg);
            s_re += mag;
            rotation = mag > 0.0 ? std::conj(hg) / mag : cplx{1.0, 0.0};
        } else {
            const auto q = quantize_phase(optimal_phase(h, g), cfg.quant_bits);
            rotation = std::polar(1.0, q.phase);
            const cplx term = hg * rotation;
            s_re += term.real();
            s_im += term.imag();
        }
        if (with_eavesdropper) eve += h * stream.complex_normal(stream_layout::p(i)) * rotation;
    }
    cplx z{0.0, 0.0};
    if (with_eavesdropper) {
        z = std::sqrt(cfg.gamma_sre_bar) * eve +
            std::sqrt(cfg.gamma_se_bar) * stream.complex_normal(stream_layout::h_se(n));
    }
    return {{s_re, s_im}, z};
}

/// Runs fn(first_trial, end_trial) for every chunk on `workers` threads and
/// returns the per-chunk results in chunk order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::uint64_t trials, int workers, Fn fn)
{
    const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<Result> out(chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::uint64_t c = next++; c < chunks; c = next++) {
                const std::uint64_t first = c * kChunkTrials;
                out[c] = fn(first, std::min(trials, first + kChunkTrials));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
        }
    };
    const auto threads = static_cast<std::uint64_t>(std::max(1, workers));
    if (threads == 1 || chunks == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t t = 0; t < std::min(threads, chunks); ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace mc_detail

/// All quantities of trial `trial_index`, as drawn by the estimators.
inline TrialRecord trial_record(const SystemConfig& cfg, std::uint64_t master_seed, std::uint64_t trial_index)
{
    const auto sums = mc_detail::simulate_trial(cfg, TrialStream(master_seed, trial_index), true);
    const double srd = cfg.gamma_srd_bar;
    const double x = sums.s.real();
    const double y = sums.s.imag();
    return {srd * std::norm(sums.s), std::norm(sums.z), x, y, srd * x * x, srd * y * y};
}

/// SOP estimates for several legitimate-link SNRs on common channel draws.
/// Entry j equals estimate_sop at gamma_srd_bar = srd_values[j] exactly.
inline std::vector<McSopResult> estimate_sop_grid(const SystemConfig& cfg, std::span<const double> srd_values,
                                                  const McConfig& mc)
{
    cfg.validate();
    mc.validate();
    for (double v : srd_values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("gamma_srd_bar", "must be positive and finite");
    }
    const auto start = std::chrono::steady_clock::now();
    const double phi = std::exp(cfg.c_th);
    const double phi_minus_1 = std::expm1(cfg.c_th);
    const std::vector<double> srd(srd_values.begin(), srd_values.end());

    // Outage iff ln(1 + gd) - ln(1 + ge) < C_th, i.e. gd < (1 + ge) phi - 1.
    auto chunk = [&](std::uint64_t first, std::uint64_t last) {
        std::vector<std::uint64_t> counts(srd.size(), 0);
        for (std::uint64_t t = first; t < last; ++t) {
            const auto sums = mc_detail::simulate_trial(cfg, TrialStream(mc.master_seed, t), true);
            const double coherent = std::norm(sums.s);
            const double threshold = phi * std::norm(sums.z) + phi_minus_1;
            for (std::size_t j = 0; j < srd.size(); ++j) counts[j] += (srd[j] * coherent < threshold) ? 1 : 0;
        }
        return counts;
    };
    const auto parts = mc_detail::run_chunks<std::vector<std::uint64_t>>(mc.trials, mc.workers, chunk);

    std::vector<std::uint64_t> totals(srd.size(), 0);
    for (const auto& p : parts) {
        for (std::size_t j = 0; j < srd.size(); ++j) totals[j] += p[j];
    }
    const double elapsed = mc_detail::seconds_since(start);
    std::vector<McSopResult> results;
    results.reserve(srd.size());
    for (auto count : totals) {
        const auto ci = binomial_interval(count, mc.trials, mc.confidence_level);
        results.push_back({static_cast<double>(count) / static_cast<double>(mc.trials), ci.half_width, count,
                           mc.trials, elapsed});
    }
    return results;
}

inline McSopResult estimate_sop(const SystemConfig& cfg, const McConfig& mc)
{
    const double srd = cfg.gamma_srd_bar;
    return estimate_sop_grid(cfg, std::span<const double>(&srd, 1), mc).front();
}

struct ComponentMomentsEstimate {
    RunningMoments x;
    RunningMoments y;
    RunningMoments gamma_e;
    RunningMoments re_z;
    RunningMoments im_z;
    RunningCovariance xy;
    RunningCovariance z_parts;

    void merge(const ComponentMomentsEstimate& o)
    {
        x.merge(o.x);
        y.merge(o.y);
        gamma_e.merge(o.gamma_e);
        re_z.merge(o.re_z);
        im_z.merge(o.im_z);
        xy.merge(o.xy);
        z_parts.merge(o.z_parts);
    }
};

/// Sample moments of X, Y (legitimate decomposition), gamma_e and Re/Im of Z.
inline ComponentMomentsEstimate estimate_component_moments(const SystemConfig& cfg, const McConfig& mc)
{
    cfg.validate();
    mc.validate();
    auto chunk = [&](std::uint64_t first, std::uint64_t last) {
        ComponentMomentsEstimate acc;
        for (std::uint64_t t = first; t < last; ++t) {
            const auto sums = mc_detail::simulate_trial(cfg, TrialStream(mc.master_seed, t), true);
            acc.x.add(sums.s.real());
            acc.y.add(sums.s.imag());
            acc.xy.add(sums.s.real(), sums.s.imag());
            acc.gamma_e.add(std::norm(sums.z));
            acc.re_z.add(sums.z.real());
            acc.im_z.add(sums.z.imag());
            acc.z_parts.add(sums.z.real(), sums.z.imag());
        }
        return acc;
    };
    ComponentMomentsEstimate total;
    for (const auto& part : mc_detail::run_chunks<ComponentMomentsEstimate>(mc.trials, mc.workers, chunk)) {
        total.merge(part);
    }
    return total;
}

struct RatioProbability {
    double probability;
    std::uint64_t satisfied;
    std::uint64_t zero_d1_trials; // gamma_d1 == 0: counted as not satisfied
    std::uint64_t trials;
};

/// Empirical Pr(gamma_d2 / gamma_d1 < threshold).
inline RatioProbability estimate_ratio_probability(const SystemConfig& cfg, const McConfig& mc, double threshold)
{
    cfg.validate();
    mc.validate();
    if (!(threshold > 0.0)) throw ConfigError("threshold", "must be > 0");
    struct Counts {
        std::uint64_t satisfied = 0;
        std::uint64_t zero = 0;
    };
    auto chunk = [&](std::uint64_t first, std::uint64_t last) {
        Counts c;
        for (std::uint64_t t = first; t < last; ++t) {
            const auto sums = mc_detail::simulate_trial(cfg, TrialStream(mc.master_seed, t), false);
            const double d1 = sums.s.real() * sums.s.real();
            const double d2 = sums.s.imag() * sums.s.imag();
            if (d1 == 0.0) {
                ++c.zero;
                continue;
            }
            if (d2 < threshold * d1) ++c.satisfied;
        }
        return c;
    };
    Counts total;
    for (const auto& c : mc_detail::run_chunks<Counts>(mc.trials, mc.workers, chunk)) {
        total.satisfied += c.satisfied;
        total.zero += c.zero;
    }
    return {static_cast<double>(total.satisfied) / static_cast<double>(mc.trials), total.satisfied, total.zero,
            mc.trials};
}

/// Column order of the trial-capture file.
inline constexpr const char* kTrialCaptureHeader = "trial,gamma_d,gamma_e,x_component,y_component,gamma_d1,gamma_d2";

/// Writes trials [0, count) as comma-separated rows, 17 significant digits.
inline void write_trial_capture(std::ostream& out, const SystemConfig& cfg, std::uint64_t master_seed,
                                std::uint64_t count)
{
    cfg.validate();
    const auto old_precision = out.precision(17);
    out << kTrialCaptureHeader << '\n';
    for (std::uint64_t t = 0; t < count; ++t) {
        const auto r = trial_record(cfg, master_seed, t);
        out << t << ',' << r.gamma_d << ',' << r.gamma_e << ',' << r.x_component << ',' << r.y_component << ','
            << r.gamma_d1 << ',' << r.gamma_d2 << '\n';
    }
    out.precision(old_precision);
}

} // namespace rissop
