#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rissop/distributions.hpp"

using namespace rissop;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

SystemConfig config(int n, QuantBits b, double srd)
{
    SystemConfig c;
    c.n_elements = n;
    c.quant_bits = b;
    c.gamma_srd_bar = srd;
    c.gamma_sre_bar = 1.0;
    c.gamma_se_bar = std::pow(10.0, -0.5);
    c.c_th = 0.05;
    return c;
}

// P(srd (X^2 + Y^2) <= z) integrated over X with x = R sin(t), which keeps
// the integrand smooth at the disc boundary.
long double cdf_sum_oracle(double z, const LegitSnrStats& s, double srd)
{
    const long double r = std::sqrt(static_cast<long double>(z) / srd);
    const long double m1 = s.m1;
    const long double s1 = std::sqrt(static_cast<long double>(s.sigma1_sq));
    const long double s2 = std::sqrt(static_cast<long double>(s.sigma2_sq));
    auto f = [&](long double t) {
        const long double x = r * std::sin(t);
        const long double half = r * std::cos(t);
        const long double density =
            std::exp(-0.5L * (x - m1) * (x - m1) / (s1 * s1)) / (s1 * std::sqrt(2.0L * oracle::kPi));
        return density * std::erf(half / (std::sqrt(2.0L) * s2)) * r * std::cos(t);
    };
    return oracle::simpson(f, -oracle::kPi / 2, oracle::kPi / 2, 20000);
}
} // namespace

TEST(LegitStats, BinaryThirtyElements)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    EXPECT_NEAR(s.m1, 15.0, 1e-12);
    EXPECT_NEAR(s.sigma2_sq, 15.0, 1e-12);
    EXPECT_NEAR(s.sigma1_sq, 15.0 - 30.0 * kPi * kPi / 16.0 * 4.0 / (kPi * kPi), 1e-12);
    EXPECT_NEAR(s.alpha, 150.0, 1e-10);
    EXPECT_NEAR(s.beta, std::sqrt(2.0 * s.sigma1_sq * 100.0), 1e-12);
    ASSERT_TRUE(s.lambda.has_value());
    EXPECT_NEAR(*s.lambda, 1.0 / (2.0 * 15.0 * 100.0), 1e-15);
    EXPECT_EQ(s.mu, 0.5);
}

TEST(LegitStats, ContinuousIsDegenerate)
{
    const auto s = legit_stats(config(30, QuantBits::continuous(), 100.0));
    EXPECT_NEAR(s.m1, 7.5 * kPi, 1e-12);
    EXPECT_NEAR(s.sigma1_sq, 30.0 * (1.0 - kPi * kPi / 16.0), 1e-12);
    EXPECT_EQ(s.sigma2_sq, 0.0);
    EXPECT_TRUE(s.degenerate());
}

TEST(LegitStats, InvariantsAcrossBits)
{
    for (int n : {1, 2, 8, 30, 256}) {
        for (int b = 1; b <= 12; ++b) {
            const auto m = component_moments(n, QuantBits::finite(b));
            EXPECT_GT(m.m1, 0.0);
            EXPECT_GT(m.sigma1_sq, 0.0);
            EXPECT_GT(m.sigma2_sq, 0.0);
        }
    }
}

// E[X^2 + Y^2] = sum_i E|h_i g_i|^2 + sum_{i != j} E[a_i a_j] E[cos(Theta_i - Theta_j)]
//             = N + N (N - 1) (pi/4)^2 sinc^2(x).
TEST(LegitStats, SecondMomentIdentity)
{
    for (int n : {1, 8, 30, 100}) {
        for (auto b : {QuantBits::finite(1), QuantBits::finite(2), QuantBits::finite(3), QuantBits::finite(4),
                       QuantBits::continuous()}) {
            const auto m = component_moments(n, b);
            const long double x = b.step_fraction();
            const long double sinc = x == 0 ? 1.0L : std::sin(oracle::kPi * x) / (oracle::kPi * x);
            const long double direct =
                n + static_cast<long double>(n) * (n - 1) * oracle::kPi * oracle::kPi / 16.0L * sinc * sinc;
            const double got = m.m1 * m.m1 + m.sigma1_sq + m.sigma2_sq;
            EXPECT_LT(std::fabs((got - direct) / direct), 1e-12) << "n=" << n << " b=" << b.to_string();
            // equivalently m1^2 / N + sigma1^2 + sigma2^2 = N
            EXPECT_NEAR((m.m1 * m.m1 / n + m.sigma1_sq + m.sigma2_sq) / n, 1.0, 1e-12);
        }
    }
}

TEST(EveStats, ThirtyElementRate)
{
    const auto e = eve_stats(config(30, QuantBits::finite(1), 1.0));
    EXPECT_NEAR(e.epsilon, 1.0 / (30.0 + std::pow(10.0, -0.5)), 1e-15);
    EXPECT_NEAR(e.epsilon, 0.032986, 1e-6);
}

TEST(EvePdf, NormalizedAndMatchesCdf)
{
    const EveSnrStats e{0.032986};
    const auto r = numerics::integrate_adaptive([&](double x) { return pdf_gamma_e(x, e); }, 0.0, kInf, 1e-12, 1e-14);
    EXPECT_NEAR(r.value, 1.0, 1e-10);
    EXPECT_NEAR(cdf_gamma_e(10.0, e), 1.0 - std::exp(-0.32986), 1e-15);
    EXPECT_THROW(pdf_gamma_e(-1.0, e), std::domain_error);
    EXPECT_THROW(cdf_gamma_e(-1.0, e), std::domain_error);
}

TEST(CdfD1, Endpoints)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    EXPECT_EQ(cdf_gamma_d1(0.0, s), 0.0);
    EXPECT_EQ(cdf_gamma_d1(1e12, s), 1.0);
    EXPECT_THROW(cdf_gamma_d1(-1.0, s), std::domain_error);
}

TEST(CdfD1, AtSquaredMean)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    EXPECT_NEAR(s.alpha * s.alpha, 22500.0, 1e-8);
    // F(alpha^2) = [erfc(0) - erfc(2 alpha / beta)] / 2
    EXPECT_NEAR(cdf_gamma_d1(22500.0, s), 0.5 - 0.5 * std::erfc(2.0 * s.alpha / s.beta), 1e-14);
}

TEST(CdfD1, MatchesTwoSidedNormalProbability)
{
    const auto s = legit_stats(config(30, QuantBits::finite(2), 3.0));
    const boost::math::normal x_law(s.m1, std::sqrt(s.sigma1_sq));
    for (double z = 1.0; z < 5000.0; z *= 1.3) {
        const double r = std::sqrt(z / 3.0);
        const double want = boost::math::cdf(x_law, r) - boost::math::cdf(x_law, -r);
        EXPECT_NEAR(cdf_gamma_d1(z, s), want, 1e-13) << "z=" << z;
    }
}

TEST(CdfD1, MonotoneOnRandomParameterizations)
{
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> n_dist(1, 200);
    std::uniform_int_distribution<int> b_dist(1, 6);
    std::uniform_real_distribution<double> db(-20.0, 40.0);
    for (int k = 0; k < 10; ++k) {
        const auto s = legit_stats(config(n_dist(rng), QuantBits::finite(b_dist(rng)), db_to_linear(db(rng))));
        const double top = 4.0 * (s.alpha + 4.0 * s.beta) * (s.alpha + 4.0 * s.beta);
        double prev = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double v = cdf_gamma_d1(top * i / 1000.0, s);
            ASSERT_GE(v, prev);
            ASSERT_LE(v, 1.0);
            prev = v;
        }
    }
}

TEST(PdfD2, NormalizationAndMean)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    auto pdf = [&](double y) { return pdf_gamma_d2(y, s); };
    EXPECT_NEAR(numerics::integrate_adaptive(pdf, 0.0, kInf, 1e-10, 1e-13).value, 1.0, 1e-8);
    const double mean =
        numerics::integrate_adaptive([&](double y) { return y * pdf(y); }, 0.0, kInf, 1e-10, 1e-13).value;
    EXPECT_NEAR(mean / (s.sigma2_sq * 100.0), 1.0, 1e-6);
    EXPECT_NEAR(mean * 2.0 * *s.lambda, 1.0, 1e-6);
}

TEST(PdfD2, ErrorsAndCdf)
{
    const auto cont = legit_stats(config(30, QuantBits::continuous(), 100.0));
    EXPECT_THROW(pdf_gamma_d2(1.0, cont), DegenerateDistributionError);
    EXPECT_EQ(cdf_gamma_d2(0.0, cont), 1.0);
    const auto s = legit_stats(config(30, QuantBits::finite(2), 10.0));
    EXPECT_THROW(pdf_gamma_d2(0.0, s), std::domain_error);
    for (double y : {0.5, 5.0, 50.0, 500.0}) {
        const double q = numerics::integrate_adaptive([&](double t) { return pdf_gamma_d2(t, s); }, 0.0, y, 1e-11, 1e-14)
                             .value;
        EXPECT_NEAR(cdf_gamma_d2(y, s), q, 1e-9) << "y=" << y;
    }
}

TEST(CdfD, ZeroAndDegenerateBranch)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    EXPECT_EQ(cdf_gamma_d_exact(0.0, s), 0.0);
    const auto c = legit_stats(config(30, QuantBits::continuous(), 100.0));
    for (double z : {10.0, 1e3, 1e5}) EXPECT_EQ(cdf_gamma_d_exact(z, c), cdf_gamma_d1(z, c));
    EXPECT_THROW(cdf_gamma_d_exact(-1.0, s), std::domain_error);
}

TEST(CdfD, MatchesDiscIntegralOracle)
{
    for (int b : {1, 2, 3}) {
        for (double srd : {0.1, 1.0, 100.0}) {
            const auto s = legit_stats(config(30, QuantBits::finite(b), srd));
            const double scale = srd * (s.m1 * s.m1 + s.sigma1_sq + s.sigma2_sq);
            for (double f : {0.01, 0.1, 0.3, 0.7, 1.0, 1.5, 3.0}) {
                const double z = f * scale;
                const double want = static_cast<double>(cdf_sum_oracle(z, s, srd));
                EXPECT_NEAR(cdf_gamma_d_exact(z, s), want, 1e-9 + 1e-7 * want) << "b=" << b << " z=" << z;
            }
        }
    }
}

TEST(CdfD, NeverAboveD1Cdf)
{
    for (int b : {1, 2, 3, 5}) {
        const auto s = legit_stats(config(30, QuantBits::finite(b), 10.0));
        const double top = 4.0 * s.alpha * s.alpha;
        for (int i = 0; i <= 200; ++i) {
            const double z = top * i / 200.0;
            EXPECT_LE(cdf_gamma_d_exact(z, s), cdf_gamma_d1(z, s) + 1e-12) << "b=" << b << " z=" << z;
        }
    }
}

TEST(CdfD, AgreesWithGaussianModelSamples)
{
    const auto s = legit_stats(config(30, QuantBits::finite(1), 100.0));
    std::mt19937_64 rng(99);
    std::normal_distribution<double> x(s.m1, std::sqrt(s.sigma1_sq));
    std::normal_distribution<double> y(0.0, std::sqrt(s.sigma2_sq));
    const int n = 200'000;
    std::vector<double> d(n);
    for (auto& v : d) {
        const double a = x(rng);
        const double b = y(rng);
        v = 100.0 * (a * a + b * b);
    }
    std::sort(d.begin(), d.end());
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double z = d[static_cast<std::size_t>(q * n)];
        EXPECT_NEAR(cdf_gamma_d_exact(z, s), q, 4.0 * std::sqrt(q * (1 - q) / n)) << "q=" << q;
    }
}
