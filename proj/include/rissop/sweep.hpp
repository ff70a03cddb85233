#pragma once

// Parameter sweeps, CSV output, named presets and the design query.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <vector>

#include "rissop/analysis.hpp"
#include "rissop/channel.hpp"
#include "rissop/montecarlo.hpp"

namespace rissop {

enum class SweepVariable { GammaSrdDb, NElements, QuantBits, CTh };

inline const char* to_string(SweepVariable v)
{
    switch (v) {
    case SweepVariable::GammaSrdDb: return "gamma_srd_db";
    case SweepVariable::NElements: return "n_elements";
    case SweepVariable::QuantBits: return "quant_bits";
    case SweepVariable::CTh: return "c_th";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view text)
{
    if (text == "gamma_srd_db") return SweepVariable::GammaSrdDb;
    if (text == "n_elements") return SweepVariable::NElements;
    if (text == "quant_bits") return SweepVariable::QuantBits;
    if (text == "c_th") return SweepVariable::CTh;
    throw ConfigError("sweep_variable", "unknown variable '" + std::string(text) + "'");
}

struct Methods {
    bool mc = false;
    bool bound = false;
    bool exact = false;
    bool asymptotic = false;

    bool any() const noexcept { return mc || bound || exact || asymptotic; }
};

/// Comma-separated subset of mc, bound, exact, asymptotic.
inline Methods parse_methods(std::string_view text)
{
    Methods m;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const auto item = text.substr(start, end - start);
        if (item == "mc") m.mc = true;
        else if (item == "bound") m.bound = true;
        else if (item == "exact") m.exact = true;
        else if (item == "asymptotic") m.asymptotic = true;
        else throw ConfigError("methods", "unknown method '" + std::string(item) + "'");
        start = end + 1;
    }
    return m;
}

/// `values` are in the unit of the variable: dB, element count, bits
/// (+infinity for continuous phases) or nats.
struct SweepSpec {
    SystemConfig base;
    SweepVariable variable = SweepVariable::GammaSrdDb;
    std::vector<double> values;
    Methods methods;
    McConfig mc;
    ExactOptions exact_options;

    void validate() const
    {
        base.validate();
        mc.validate();
        if (values.empty()) throw ConfigError("values", "must not be empty");
        if (!methods.any()) throw ConfigError("methods", "must not be empty");
        bool increasing = true;
        bool decreasing = true;
        for (std::size_t i = 1; i < values.size(); ++i) {
            increasing = increasing && values[i] > values[i - 1];
            decreasing = decreasing && values[i] < values[i - 1];
        }
        if (!increasing && !decreasing) throw ConfigError("values", "must be strictly ordered");
        for (std::size_t i = 0; i < values.size(); ++i) point_config(i).validate();
    }

    SystemConfig point_config(std::size_t i) const
    {
        SystemConfig c = base;
        const double v = values.at(i);
        switch (variable) {
        case SweepVariable::GammaSrdDb:
            if (!std::isfinite(v)) throw ConfigError("values", "gamma_srd_db must be finite");
            c.gamma_srd_bar = db_to_linear(v);
            break;
        case SweepVariable::NElements:
            if (!(v >= 1.0) || v != std::floor(v) || v > std::numeric_limits<int>::max()) {
                throw ConfigError("values", "n_elements must be a positive integer");
            }
            c.n_elements = static_cast<int>(v);
            break;
        case SweepVariable::QuantBits:
            if (v == std::numeric_limits<double>::infinity()) {
                c.quant_bits = QuantBits::continuous();
            } else {
                if (v != std::floor(v) || !(v >= 1.0) || v > QuantBits::kMaxBits) {
                    throw ConfigError("values", "quant_bits must be an integer in [1, 30] or inf");
                }
                c.quant_bits = QuantBits::finite(static_cast<int>(v));
            }
            break;
        case SweepVariable::CTh: c.c_th = v; break;
        }
        return c;
    }
};

struct SweepRow {
    double gamma_srd_db = 0.0;
    int n_elements = 0;
    QuantBits quant_bits = QuantBits::continuous();
    double c_th = 0.0;
    std::optional<double> sop_bound;
    std::optional<double> sop_exact;
    std::optional<double> sop_asymptotic;
    std::optional<double> sop_mc;
    std::optional<double> mc_ci_half_width;
    std::optional<std::uint64_t> mc_trials;
    std::string error; // empty when every requested method succeeded

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

namespace sweep_detail {

// CSV fields never carry separators or line breaks.
inline std::string sanitize(std::string_view text)
{
    std::string out(text);
    for (char& ch : out) {
        if (ch == ',' || ch == '"') ch = ';';
        else if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return out;
}

inline void append_error(std::string& error, std::string_view method, std::string_view what)
{
    if (!error.empty()) error += " | ";
    error += std::string(method) + ": " + sanitize(what);
}

inline SweepRow evaluate_analytic(const SweepSpec& spec, std::size_t i)
{
    const SystemConfig cfg = spec.point_config(i);
    SweepRow row;
    row.gamma_srd_db =
        spec.variable == SweepVariable::GammaSrdDb ? spec.values[i] : linear_to_db(cfg.gamma_srd_bar);
    row.n_elements = cfg.n_elements;
    row.quant_bits = cfg.quant_bits;
    row.c_th = cfg.c_th;
    auto attempt = [&](bool wanted, const char* name, std::optional<double>& slot, auto&& fn) {
        if (!wanted) return;
        try {
            slot = fn();
        } catch (const numerics::AccuracyError& e) {
            slot = detail::clamp_probability(e.best_estimate().value);
            append_error(row.error, name, e.what());
        } catch (const std::exception& e) {
            append_error(row.error, name, e.what());
        }
    };
    attempt(spec.methods.bound, "bound", row.sop_bound, [&] { return sop_bound_closed_form(cfg).value; });
    attempt(spec.methods.exact, "exact", row.sop_exact, [&] { return sop_exact_numeric(cfg, spec.exact_options).value; });
    attempt(spec.methods.asymptotic, "asymptotic", row.sop_asymptotic, [&] { return sop_asymptotic(cfg).value; });
    return row;
}

inline void fill_mc(SweepRow& row, const McSopResult& r)
{
    row.sop_mc = r.sop_hat;
    row.mc_ci_half_width = r.ci_half_width;
    row.mc_trials = r.trials;
}

} // namespace sweep_detail

/// Evaluates every sweep point. Analytic methods run concurrently across
/// points (up to mc.workers threads); rows come back in sweep order. A
/// failure at one point is recorded in that row's `error` field and the run
/// continues. Invalid specs throw ConfigError before any work starts.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec)
{
    spec.validate();
    const std::size_t n = spec.values.size();
    std::vector<SweepRow> rows(n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) rows[i] = sweep_detail::evaluate_analytic(spec, i);
    };
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(spec.mc.workers), n);
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    if (spec.methods.mc) {
        if (spec.variable == SweepVariable::GammaSrdDb) {
            // one set of channel draws serves every SNR point
            std::vector<double> srd(n);
            for (std::size_t i = 0; i < n; ++i) srd[i] = spec.point_config(i).gamma_srd_bar;
            try {
                const auto results = estimate_sop_grid(spec.base, srd, spec.mc);
                for (std::size_t i = 0; i < n; ++i) sweep_detail::fill_mc(rows[i], results[i]);
            } catch (const std::exception& e) {
                for (auto& row : rows) sweep_detail::append_error(row.error, "mc", e.what());
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                try {
                    sweep_detail::fill_mc(rows[i], estimate_sop(spec.point_config(i), spec.mc));
                } catch (const std::exception& e) {
                    sweep_detail::append_error(rows[i].error, "mc", e.what());
                }
            }
        }
    }
    return rows;
}

inline bool any_error(const std::vector<SweepRow>& rows)
{
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kSweepCsvHeader = "gamma_srd_db,n_elements,quant_bits,c_th,sop_bound,sop_exact,"
                                               "sop_asymptotic,sop_mc,mc_ci_half_width,mc_trials,error";

/// Shortest representation that reads back to the same double.
inline std::string format_real(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_real_field(std::string_view text, const char* column)
{
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string("csv: bad value in column ") + column + ": '" + std::string(text) +
                                    "'");
    }
    return v;
}

inline std::string format_row(const SweepRow& r)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    std::string line;
    line += format_real(r.gamma_srd_db) + ',';
    line += std::to_string(r.n_elements) + ',';
    line += r.quant_bits.to_string() + ',';
    line += format_real(r.c_th) + ',';
    line += opt(r.sop_bound) + ',';
    line += opt(r.sop_exact) + ',';
    line += opt(r.sop_asymptotic) + ',';
    line += opt(r.sop_mc) + ',';
    line += opt(r.mc_ci_half_width) + ',';
    line += (r.mc_trials ? std::to_string(*r.mc_trials) : std::string()) + ',';
    line += sweep_detail::sanitize(r.error);
    return line;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows)
{
    out << kSweepCsvHeader << '\n';
    for (const auto& r : rows) out << format_row(r) << '\n';
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream out;
    write_sweep_csv(out, rows);
    return out.str();
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kSweepCsvHeader) {
        throw std::invalid_argument("csv: missing or unexpected header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (int c = 0; c < 10; ++c) {
            const auto comma = rest.find(',');
            if (comma == std::string_view::npos) throw std::invalid_argument("csv: too few fields: " + line);
            f.push_back(rest.substr(0, comma));
            rest.remove_prefix(comma + 1);
        }
        f.push_back(rest);
        auto opt = [](std::string_view s, const char* col) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return parse_real_field(s, col);
        };
        SweepRow r;
        r.gamma_srd_db = parse_real_field(f[0], "gamma_srd_db");
        r.n_elements = static_cast<int>(parse_real_field(f[1], "n_elements"));
        r.quant_bits = QuantBits::parse(f[2]);
        r.c_th = parse_real_field(f[3], "c_th");
        r.sop_bound = opt(f[4], "sop_bound");
        r.sop_exact = opt(f[5], "sop_exact");
        r.sop_asymptotic = opt(f[6], "sop_asymptotic");
        r.sop_mc = opt(f[7], "sop_mc");
        r.mc_ci_half_width = opt(f[8], "mc_ci_half_width");
        if (!f[9].empty()) {
            std::uint64_t t = 0;
            const auto res = std::from_chars(f[9].data(), f[9].data() + f[9].size(), t);
            if (res.ec != std::errc{} || res.ptr != f[9].data() + f[9].size()) {
                throw std::invalid_argument("csv: bad value in column mc_trials");
            }
            r.mc_trials = t;
        }
        r.error = std::string(f[10]);
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<SweepRow> parse_sweep_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return read_sweep_csv(in);
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline std::vector<double> db_grid(double first, double last, double step)
{
    std::vector<double> v;
    const auto count = static_cast<int>(std::llround((last - first) / step));
    for (int i = 0; i <= count; ++i) v.push_back(first + step * i);
    return v;
}

/// Common setting of both presets: SE -5 dB, SRE 0 dB.
inline SystemConfig preset_base(int n, QuantBits bits, double c_th)
{
    SystemConfig c;
    c.n_elements = n;
    c.quant_bits = bits;
    c.gamma_sre_bar = db_to_linear(0.0);
    c.gamma_se_bar = db_to_linear(-5.0);
    c.c_th = c_th;
    return c;
}

inline std::vector<double> fig2_srd_grid() { return db_grid(-20.0, 40.0, 2.0); }
inline std::vector<double> fig3_srd_grid() { return db_grid(-10.0, 40.0, 2.0); }

/// Impact of b: N = 30, C_th = 0.05, b in {1, 2, 3, continuous}.
inline std::vector<SweepSpec> preset_fig2(const McConfig& mc)
{
    std::vector<SweepSpec> specs;
    for (auto bits : {QuantBits::finite(1), QuantBits::finite(2), QuantBits::finite(3), QuantBits::continuous()}) {
        SweepSpec s;
        s.base = preset_base(30, bits, 0.05);
        s.values = fig2_srd_grid();
        s.methods.bound = true;
        s.methods.mc = true;
        s.mc = mc;
        specs.push_back(s);
    }
    return specs;
}

/// Element count versus phase resolution at C_th = 0.2.
inline std::vector<SweepSpec> preset_fig3(const McConfig& mc)
{
    std::vector<SweepSpec> specs;
    const std::pair<int, QuantBits> curves[] = {{30, QuantBits::continuous()},
                                                {30, QuantBits::finite(1)},
                                                {48, QuantBits::finite(1)},
                                                {60, QuantBits::finite(1)}};
    for (const auto& [n, bits] : curves) {
        SweepSpec s;
        s.base = preset_base(n, bits, 0.2);
        s.values = fig3_srd_grid();
        s.methods.bound = true;
        s.methods.asymptotic = true;
        s.methods.mc = true;
        s.mc = mc;
        specs.push_back(s);
    }
    return specs;
}

inline std::vector<SweepSpec> preset(std::string_view name, const McConfig& mc)
{
    if (name == "fig2") return preset_fig2(mc);
    if (name == "fig3") return preset_fig3(mc);
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected fig2 or fig3)");
}

/// Runs several sweeps and concatenates their rows in order.
inline std::vector<SweepRow> run_sweeps(const std::vector<SweepSpec>& specs)
{
    for (const auto& s : specs) s.validate();
    std::vector<SweepRow> rows;
    for (const auto& s : specs) {
        auto part = run_sweep(s);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Design query
// ---------------------------------------------------------------------------

struct DesignRecommendation {
    int n_binary;
    int n_continuous;
    double ratio; // n_binary / n_continuous
    double sop_binary;
    double sop_continuous;
};

inline constexpr int kDesignMaxElements = 1'000'000;

/// Smallest N whose high-SNR SOP for the given phase resolution is at most
/// `target`. k is re-evaluated for each candidate N from the configured SNRs.
inline int smallest_elements(double target, const SystemConfig& cfg, QuantBits bits)
{
    auto sop_at = [&](int n) {
        SystemConfig c = cfg;
        c.n_elements = n;
        return asymptotic_sop(k_factor(c), n, bits).value;
    };
    if (sop_at(kDesignMaxElements) > target) {
        throw std::range_error("design_query: target SOP not reachable with N <= " +
                               std::to_string(kDesignMaxElements));
    }
    int lo = 1;
    int hi = kDesignMaxElements;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (sop_at(mid) <= target) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

inline DesignRecommendation design_query(double target_sop, const SystemConfig& cfg)
{
    if (!(target_sop > 0.0 && target_sop < 1.0)) throw ConfigError("target", "must lie in (0, 1)");
    cfg.validate();
    const int nb = smallest_elements(target_sop, cfg, QuantBits::finite(1));
    const int nc = smallest_elements(target_sop, cfg, QuantBits::continuous());
    SystemConfig cb = cfg;
    cb.n_elements = nb;
    SystemConfig cc = cfg;
    cc.n_elements = nc;
    return {nb, nc, static_cast<double>(nb) / nc, asymptotic_sop_binary(k_factor(cb), nb),
            asymptotic_sop_continuous(k_factor(cc), nc)};
}

} // namespace rissop
