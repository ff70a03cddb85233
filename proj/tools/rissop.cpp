// Command-line front end: sweeps, single-point evaluations, presets and the
// element-count design query. Sweep output is CSV (stdout or --out).

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rissop/rissop.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = rissop::McConfig{}.master_seed;
    int workers = 0; // 0: hardware concurrency
    std::optional<double> c_th_bits;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config)
{
    auto* cfg = cmd->add_option("--config", o.config_path, "scenario file (key = value)");
    if (needs_config) cfg->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", o.out_path, "CSV output path (default: stdout)");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--workers", o.workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--c-th-bits", o.c_th_bits, "target secrecy rate in bits (overrides the file)");
}

rissop::McConfig mc_config(const CommonOptions& o)
{
    rissop::McConfig mc;
    mc.trials = o.trials;
    mc.master_seed = o.seed;
    mc.workers = o.workers > 0 ? o.workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return mc;
}

rissop::SystemConfig load_config(const CommonOptions& o)
{
    const auto sc = rissop::load_scenario(o.config_path);
    for (const auto& w : sc.warnings) std::cerr << "warning: " << w << '\n';
    auto cfg = sc.config;
    if (o.c_th_bits) cfg.c_th = *o.c_th_bits * std::numbers::ln2;
    cfg.validate();
    return cfg;
}

std::vector<double> parse_values(const std::string& text)
{
    std::vector<double> v;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "inf" || item == "continuous") {
            v.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw rissop::ConfigError("values", "cannot parse '" + item + "'");
        }
    }
    return v;
}

int emit(const std::vector<rissop::SweepRow>& rows, const std::string& out_path)
{
    if (out_path.empty()) {
        rissop::write_sweep_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw rissop::ConfigError("out", "cannot open '" + out_path + "'");
        rissop::write_sweep_csv(out, rows);
    }
    for (const auto& r : rows) {
        if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
    }
    return rissop::any_error(rows) ? 1 : 0;
}

// Evaluates the scenario as-is: a one-point sweep over its own C_th.
int single_point(const CommonOptions& o, rissop::Methods methods)
{
    rissop::SweepSpec spec;
    spec.base = load_config(o);
    spec.variable = rissop::SweepVariable::CTh;
    spec.values = {spec.base.c_th};
    spec.methods = methods;
    spec.mc = mc_config(o);
    return emit(rissop::run_sweep(spec), o.out_path);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secrecy outage probability of an RIS-assisted wiretap link with discrete phase control"};
    app.require_subcommand(1);

    CommonOptions sweep_o, bound_o, exact_o, asym_o, mc_o, design_o, preset_o;

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter and write CSV");
    add_common(sweep, sweep_o, true);
    std::string sweep_var = "gamma_srd_db";
    std::string values_text;
    std::string methods_text = "bound";
    sweep->add_option("--sweep-var", sweep_var, "gamma_srd_db | n_elements | quant_bits | c_th");
    sweep->add_option("--values", values_text, "comma-separated values (quant_bits accepts inf)")->required();
    sweep->add_option("--methods", methods_text, "subset of mc,bound,exact,asymptotic");

    auto* bound = app.add_subcommand("bound", "closed-form upper bound");
    add_common(bound, bound_o, true);
    auto* exact = app.add_subcommand("exact", "numerically integrated SOP under the large-N laws");
    add_common(exact, exact_o, true);
    auto* asym = app.add_subcommand("asymptotic", "high-SNR asymptotic SOP");
    add_common(asym, asym_o, true);

    auto* mc = app.add_subcommand("mc", "Monte-Carlo SOP estimate");
    add_common(mc, mc_o, true);
    std::string capture_path;
    std::uint64_t capture_count = 10'000;
    mc->add_option("--capture", capture_path, "also dump per-trial records to this file");
    mc->add_option("--capture-count", capture_count, "number of trials to dump")->check(CLI::PositiveNumber);

    auto* design = app.add_subcommand("design", "smallest N reaching a target SOP, binary vs continuous phases");
    add_common(design, design_o, true);
    double target = 0.0;
    design->add_option("--target", target, "target SOP in (0, 1)")->required();

    auto* preset = app.add_subcommand("preset", "run a named reproduction sweep");
    add_common(preset, preset_o, false);
    std::string preset_name;
    preset->add_option("--preset", preset_name, "fig2 | fig3")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*sweep) {
            rissop::SweepSpec spec;
            spec.base = load_config(sweep_o);
            spec.variable = rissop::parse_sweep_variable(sweep_var);
            spec.values = parse_values(values_text);
            spec.methods = rissop::parse_methods(methods_text);
            spec.mc = mc_config(sweep_o);
            return emit(rissop::run_sweep(spec), sweep_o.out_path);
        }
        if (*bound) return single_point(bound_o, {.bound = true});
        if (*exact) return single_point(exact_o, {.exact = true});
        if (*asym) return single_point(asym_o, {.asymptotic = true});
        if (*mc) {
            if (!capture_path.empty()) {
                std::ofstream out(capture_path);
                if (!out) throw rissop::ConfigError("capture", "cannot open '" + capture_path + "'");
                rissop::write_trial_capture(out, load_config(mc_o), mc_o.seed, capture_count);
            }
            return single_point(mc_o, {.mc = true});
        }
        if (*design) {
            const auto r = rissop::design_query(target, load_config(design_o));
            std::cout << "n_binary,n_continuous,ratio,sop_binary,sop_continuous\n"
                      << r.n_binary << ',' << r.n_continuous << ',' << rissop::format_real(r.ratio) << ','
                      << rissop::format_real(r.sop_binary) << ',' << rissop::format_real(r.sop_continuous) << '\n';
            return 0;
        }
        if (*preset) {
            return emit(rissop::run_sweeps(rissop::preset(preset_name, mc_config(preset_o))), preset_o.out_path);
        }
    } catch (const rissop::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
