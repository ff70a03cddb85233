// How closely the simulated link follows the large-N Gaussian laws, as a
// function of the number of elements. Deviations are printed and only their
// trend is asserted.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rissop/analysis.hpp"
#include "rissop/montecarlo.hpp"

using namespace rissop;

namespace {
SystemConfig config(int n, QuantBits b, double srd_db)
{
    SystemConfig c;
    c.n_elements = n;
    c.quant_bits = b;
    c.gamma_srd_bar = db_to_linear(srd_db);
    c.gamma_sre_bar = 1.0;
    c.gamma_se_bar = db_to_linear(-5.0);
    c.c_th = 0.05;
    return c;
}

std::vector<TrialRecord> records(const SystemConfig& cfg, std::uint64_t count, std::uint64_t seed)
{
    std::vector<TrialRecord> r;
    r.reserve(count);
    for (std::uint64_t t = 0; t < count; ++t) r.push_back(trial_record(cfg, seed, t));
    return r;
}

// Given h, the RIS-E sum is CN(0, sum |h_i|^2), so gamma_e is exponential with
// mean sre G + se, G ~ Gamma(N, 1): the finite-N law of gamma_e.
double eve_cdf_finite_n(double x, const SystemConfig& cfg)
{
    const boost::math::gamma_distribution<double> g_law(cfg.n_elements, 1.0);
    const double top = cfg.n_elements + 30.0 * std::sqrt(cfg.n_elements) + 60.0;
    auto f = [&](oracle::real g) {
        const double gd = static_cast<double>(g);
        if (gd <= 0.0) return 0.0L;
        const long double mean = cfg.gamma_sre_bar * g + cfg.gamma_se_bar;
        return static_cast<long double>(boost::math::pdf(g_law, gd)) * std::exp(-x / mean);
    };
    return 1.0 - static_cast<double>(oracle::simpson(f, 0.0L, top, 4000));
}

constexpr std::uint64_t kSamples = 100'000;
} // namespace

TEST(CltFidelity, EavesdropperLawConvergesWithN)
{
    std::vector<double> ks_exponential;
    for (int n : {8, 16, 30, 64}) {
        const auto cfg = config(n, QuantBits::finite(1), 0.0);
        const auto recs = records(cfg, kSamples, 1234);
        std::vector<double> ge;
        for (const auto& r : recs) ge.push_back(r.gamma_e);
        const double eps = eve_stats(cfg).epsilon;
        const double d_exp = oracle::ks_statistic(ge, [eps](double x) { return -std::expm1(-eps * x); });
        std::sort(ge.begin(), ge.end());
        double d_exact = 0.0;
        for (int q = 1; q < 200; ++q) {
            const std::size_t i = q * ge.size() / 200;
            d_exact = std::max(d_exact, std::fabs(eve_cdf_finite_n(ge[i], cfg) - static_cast<double>(i + 1) / ge.size()));
        }
        std::printf("N=%3d  KS(gamma_e vs exponential)=%.5f  max|F_emp - F_finiteN| on 199 quantiles=%.5f\n", n,
                    d_exp, d_exact);
        // the finite-N law fits within sampling noise
        EXPECT_LT(d_exact, 1.63 / std::sqrt(static_cast<double>(kSamples)) + 1e-4) << n;
        ks_exponential.push_back(d_exp);
    }
    EXPECT_GT(ks_exponential.front(), ks_exponential.back());
    EXPECT_GT(ks_exponential.front(), 2.0 * 1.36 / std::sqrt(static_cast<double>(kSamples)));
}

TEST(CltFidelity, LegitimateLawConvergesWithN)
{
    std::vector<double> dev;
    for (int n : {8, 16, 30, 64}) {
        const auto cfg = config(n, QuantBits::finite(1), 20.0);
        const auto stats = legit_stats(cfg);
        auto recs = records(cfg, kSamples, 99);
        std::vector<double> gd;
        for (const auto& r : recs) gd.push_back(r.gamma_d);
        std::sort(gd.begin(), gd.end());
        double d = 0.0;
        for (int q = 1; q < 100; ++q) {
            const std::size_t i = q * gd.size() / 100;
            d = std::max(d, std::fabs(cdf_gamma_d_exact(gd[i], stats) - static_cast<double>(i + 1) / gd.size()));
        }
        const double at_mean_square =
            std::fabs(cdf_gamma_d1(stats.alpha * stats.alpha, stats) -
                      static_cast<double>(std::lower_bound(gd.begin(), gd.end(), stats.alpha * stats.alpha) -
                                          gd.begin()) /
                          gd.size());
        std::printf("N=%3d  max|F_emp(gamma_d) - F_model| on 99 quantiles=%.5f  |F_emp - F_d1| at alpha^2=%.5f\n", n,
                    d, at_mean_square);
        dev.push_back(d);
    }
    EXPECT_GT(dev.front(), dev.back());
}

TEST(CltFidelity, OutageAgreementReport)
{
    McConfig mc;
    mc.trials = 200'000;
    mc.master_seed = 5;
    for (int n : {8, 16, 30}) {
        for (auto b : {QuantBits::finite(1), QuantBits::continuous()}) {
            for (double db : {-15.0, -10.0, -5.0}) {
                const auto cfg = config(n, b, db);
                const auto sim = estimate_sop(cfg, mc);
                const double bound = sop_bound_closed_form(cfg).value;
                const double exact = sop_exact_numeric(cfg).value;
                std::printf("N=%2d b=%-3s SRD=%5.1f dB  mc=%.5f +- %.5f  exact=%.5f  bound=%.5f  (exact-mc)/ci=%.1f\n", n,
                            b.to_string().c_str(), db, sim.sop_hat, sim.ci_half_width, exact, bound,
                            (exact - sim.sop_hat) / sim.ci_half_width);
                EXPECT_GE(bound, exact - 1e-9);
            }
        }
    }
}
