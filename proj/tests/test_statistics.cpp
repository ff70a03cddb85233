#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rissop/statistics.hpp"

using rissop::binomial_interval;
using rissop::RunningCovariance;
using rissop::RunningMoments;

namespace {
std::vector<double> sample(int n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> g(2.0, 1.5);
    std::vector<double> v(n);
    for (auto& x : v) x = g(rng);
    return v;
}
} // namespace

TEST(RunningMoments, MatchesTwoPassMoments)
{
    const auto v = sample(5000, 1);
    RunningMoments m;
    for (double x : v) m.add(x);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= v.size();
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : v) {
        m2 += (x - mean) * (x - mean);
        m4 += std::pow(x - mean, 4);
    }
    const double n = v.size();
    EXPECT_EQ(m.count(), v.size());
    EXPECT_NEAR(m.mean(), mean, 1e-12);
    EXPECT_NEAR(m.variance(), m2 / (n - 1), 1e-10);
    const double mu2 = m2 / n;
    EXPECT_NEAR(m.variance_standard_error(), std::sqrt((m4 / n - mu2 * mu2) / n), 1e-10);
    EXPECT_NEAR(m.mean_standard_error(), std::sqrt(m2 / (n - 1) / n), 1e-12);
}

TEST(RunningMoments, MergeEqualsSequential)
{
    const auto v = sample(3001, 2);
    RunningMoments all, a, b, c;
    for (std::size_t i = 0; i < v.size(); ++i) {
        all.add(v[i]);
        (i < 1000 ? a : (i < 1700 ? b : c)).add(v[i]);
    }
    a.merge(b);
    a.merge(c);
    EXPECT_EQ(a.count(), all.count());
    EXPECT_NEAR(a.mean(), all.mean(), 1e-12);
    EXPECT_NEAR(a.variance(), all.variance(), 1e-10);
    EXPECT_NEAR(a.variance_standard_error(), all.variance_standard_error(), 1e-10);
}

TEST(RunningMoments, EmptyAndConstant)
{
    RunningMoments m;
    EXPECT_EQ(m.variance(), 0.0);
    m.merge(RunningMoments{});
    EXPECT_EQ(m.count(), 0u);
    for (int i = 0; i < 10; ++i) m.add(3.0);
    EXPECT_EQ(m.mean(), 3.0);
    EXPECT_EQ(m.variance(), 0.0);
}

TEST(RunningCovariance, CorrelationOfLinearPair)
{
    RunningCovariance c, d;
    const auto v = sample(1000, 3);
    for (std::size_t i = 0; i < v.size(); ++i) {
        c.add(v[i], 2.0 * v[i] + 1.0);
        d.add(v[i], -v[i]);
    }
    EXPECT_NEAR(c.correlation(), 1.0, 1e-12);
    EXPECT_NEAR(d.correlation(), -1.0, 1e-12);
    EXPECT_NEAR(c.correlation_standard_error(), 0.0, 1e-10);
}

TEST(BinomialInterval, NormalApproximation)
{
    const auto ci = binomial_interval(500, 1000, 0.95);
    EXPECT_FALSE(ci.exact);
    EXPECT_NEAR(ci.half_width, 1.959963984540054 * std::sqrt(0.25 / 1000), 1e-12);
    EXPECT_NEAR(ci.lower, 0.5 - ci.half_width, 1e-15);
}

TEST(BinomialInterval, ClopperPearsonForFewSuccesses)
{
    // Zero successes: upper end is 1 - (alpha/2)^(1/n).
    const auto zero = binomial_interval(0, 100, 0.95);
    EXPECT_TRUE(zero.exact);
    EXPECT_EQ(zero.lower, 0.0);
    EXPECT_NEAR(zero.upper, 1.0 - std::pow(0.025, 1.0 / 100.0), 1e-12);
    EXPECT_NEAR(zero.half_width, zero.upper, 1e-15);

    // All successes mirror the zero case.
    const auto all = binomial_interval(100, 100, 0.95);
    EXPECT_NEAR(all.lower, std::pow(0.025, 1.0 / 100.0), 1e-12);
    EXPECT_EQ(all.upper, 1.0);

    const auto few = binomial_interval(5, 1000, 0.95);
    EXPECT_TRUE(few.exact);
    EXPECT_LT(few.lower, 0.005);
    EXPECT_GT(few.upper, 0.005);
    EXPECT_GE(few.half_width, few.upper - 0.005);
}

TEST(BinomialInterval, RejectsBadInput)
{
    EXPECT_THROW(binomial_interval(1, 0, 0.95), std::invalid_argument);
    EXPECT_THROW(binomial_interval(5, 4, 0.95), std::invalid_argument);
    EXPECT_THROW(binomial_interval(1, 4, 1.0), std::invalid_argument);
}
