#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include <gtest/gtest.h>

#include "stable_stein/errors.hpp"
#include "stable_stein/rng.hpp"
#include "stable_stein/sampling.hpp"
#include "stable_stein/stable_density.hpp"
#include "stable_stein/wasserstein.hpp"

using namespace stable_stein;

namespace {

struct Mean {
    double mean;
    double se;
};

template <class F>
Mean mc_mean(std::uint64_t draws, std::uint64_t stream, F&& f) {
    RngStream rng(2024, make_stream_id(StreamTag::user, stream));
    double m = 0.0, s = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double x = f(rng);
        const double d = x - m;
        m += d / static_cast<double>(i + 1);
        s += d * (x - m);
    }
    return {m, std::sqrt(s / static_cast<double>(draws - 1) / static_cast<double>(draws))};
}

// Empirical P(|xi| > x) at each probe vs the analytic tail, 3 binomial SE.
void check_abs_tail(const DistributionSpec& spec, const std::vector<double>& probes, std::uint64_t stream) {
    const std::uint64_t m = 400000;
    std::vector<std::uint64_t> hits(probes.size(), 0);
    RngStream rng(99, make_stream_id(StreamTag::user, stream));
    for (std::uint64_t i = 0; i < m; ++i) {
        const double x = std::fabs(sample_summand(spec, rng));
        for (std::size_t k = 0; k < probes.size(); ++k) hits[k] += x > probes[k];
    }
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double p = spec.abs_tail(probes[k]);
        const double se = std::sqrt(p * (1 - p) / m);
        EXPECT_LE(std::fabs(static_cast<double>(hits[k]) / m - p), 3 * se) << spec.name() << " x=" << probes[k];
    }
}

}  // namespace

TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}), (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, OpenIntervalAndReproducible) {
    RngStream a(5, 17), b(5, 17), c(5, 18);
    int same = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u = a.uniform();
        EXPECT_GT(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_EQ(u, b.uniform());
        same += u == c.uniform();
    }
    EXPECT_EQ(same, 0);
    EXPECT_EQ(make_stream_id(StreamTag::floor, 3) >> 56, 2u);
}

TEST(RngStream, UniformMoments) {
    const auto m = mc_mean(1000000, 1, [](RngStream& r) { return r.uniform(); });
    EXPECT_NEAR(m.mean, 0.5, 3 * m.se);
    const auto e = mc_mean(1000000, 2, [](RngStream& r) { return r.exponential(); });
    EXPECT_NEAR(e.mean, 1.0, 3 * e.se);
}

TEST(SampleSummand, ParetoTailAndMean) {
    const auto s = DistributionSpec::pareto(1.5);
    check_abs_tail(s, {1.5, 2.0, 5.0, 10.0, 40.0}, 10);
    const auto m = mc_mean(1000000, 11, [&](RngStream& r) { return sample_summand(s, r); });
    EXPECT_LE(std::fabs(m.mean), 3 * m.se);
}

TEST(SampleSummand, OtherSpecTails) {
    check_abs_tail(DistributionSpec::modified_pareto_balanced(1.5, 1.8), {1.2, 2.0, 5.0, 10.0, 40.0}, 12);
    check_abs_tail(DistributionSpec::hall(1.3, 0.25, 0.75, 2.0), {1.05, 1.5, 3.0, 8.0, 30.0}, 13);
    check_abs_tail(DistributionSpec::log_pareto(1.5, 1.0, std::exp(1.5), std::exp(1.0)), {3.0, 5.0, 10.0, 40.0, 200.0},
                   14);
    const auto tm = TailModel::normalized(1.5, 1.0, PowerSeries({{0.3, 0.5}}), PowerSeries({{0.2, 1.0}}));
    check_abs_tail(DistributionSpec::general_tail(tm), {1.0, 1.5, 4.0, 9.0, 50.0}, 15);
}

// E[X 1{t < X <= M}] has finite variance, unlike the untruncated moment.
TEST(SampleSummand, TruncatedFirstMoment) {
    const auto s = DistributionSpec::pareto(1.5);
    const double M = 1e4;
    for (double t : {0.5, 2.0, 5.0}) {
        const auto m = mc_mean(1000000, 20, [&](RngStream& r) {
            const double x = sample_summand(s, r);
            return x > t && x <= M ? x : 0.0;
        });
        const double lo = std::max(t, 1.0);
        const double closed = 1.5 / (2 * 0.5) * (std::pow(lo, -0.5) - std::pow(M, -0.5));
        EXPECT_LE(std::fabs(m.mean - closed), 3 * m.se) << t;
    }
}

TEST(SampleStable, CharacteristicFunction) {
    for (double a : {1.2, 1.5, 1.8}) {
        for (double lam : {0.5, 1.0, 2.0}) {
            const auto c = mc_mean(200000, 30, [&](RngStream& r) { return std::cos(lam * sample_stable(a, r)); });
            const auto s = mc_mean(200000, 30, [&](RngStream& r) { return std::sin(lam * sample_stable(a, r)); });
            EXPECT_NEAR(c.mean, std::exp(-std::pow(lam, a)), 4 / std::sqrt(200000.0)) << a << " " << lam;
            EXPECT_NEAR(s.mean, 0.0, 4 / std::sqrt(200000.0));
        }
    }
}

TEST(SampleStable, CauchyQuartiles) {
    const auto v = sample_stable_sorted(1.0, 200000, 3, StreamTag::user);
    const double above1 = static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), 1.0)) / v.size();
    EXPECT_NEAR(above1, 0.25, 3 * std::sqrt(0.25 * 0.75 / v.size()));
    EXPECT_NEAR(v[v.size() / 2], 0.0, 0.01);
}

TEST(SampleSum, IndependentOfThreadCount) {
    const auto s = DistributionSpec::pareto(1.5);
    const auto a = sample_sum(s, 50, 20000, 7, 1);
    const auto b = sample_sum(s, 50, 20000, 7, 8);
    ASSERT_EQ(a.values.size(), b.values.size());
    EXPECT_EQ(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)), 0);
    EXPECT_TRUE(std::is_sorted(a.values.begin(), a.values.end()));
}

TEST(SampleSum, NestedEqualsSeparateRuns) {
    const auto s = DistributionSpec::modified_pareto_balanced(1.5, 3.0);
    const std::vector<std::uint64_t> grid{1, 10, 100};
    const auto nested = sample_sums_nested(s, grid, 3000, 11, 3);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto one = sample_sum(s, grid[k], 3000, 11, 2);
        EXPECT_EQ(nested[k].values, one.values) << grid[k];
        EXPECT_EQ(nested[k].n, grid[k]);
    }
    const std::vector<std::uint64_t> bad{10, 5};
    EXPECT_THROW(sample_sums_nested(s, bad, 100, 1), UsageError);
}

TEST(SampleSum, SingleSummandDistribution) {
    const auto s = DistributionSpec::pareto(1.5);
    const auto b = sample_sum(s, 1, 100000, 5);
    const double scale = std::pow(s.ell(1), 1 / 1.5);
    double ks = 0.0;
    const double m = static_cast<double>(b.values.size());
    for (std::size_t i = 0; i < b.values.size(); ++i) {
        const double x = b.values[i] * scale;
        const double F = x >= 0 ? 1.0 - s.upper_tail(x) : s.lower_tail(-x);
        ks = std::max({ks, std::fabs(F - i / m), std::fabs(F - (i + 1) / m)});
    }
    EXPECT_LT(ks, 1.63 / std::sqrt(m));
}

TEST(SampleSum, UpperQuantileExceedance) {
    const auto s = DistributionSpec::pareto(1.5);
    const auto b = sample_sum(s, 10000, 100000, 21);
    const double q = quantile(StableLaw(1.5), 0.95);
    const double frac = static_cast<double>(b.values.end() - std::upper_bound(b.values.begin(), b.values.end(), q)) /
                        static_cast<double>(b.values.size());
    EXPECT_NEAR(frac, 0.05, 3 * std::sqrt(0.05 * 0.95 / 100000));
}

TEST(EmpiricalW1, PointMassAtZero) {
    for (double a : {1.3, 1.5, 1.9}) {
        const std::vector<double> zeros(1000, 0.0);
        EXPECT_NEAR(w1_one_sample(zeros, StableLaw(a)) / mean_abs(StableLaw(a)), 1.0, 1e-8) << a;
    }
}

TEST(EmpiricalW1, ShiftedPointMass) {
    const StableLaw law(1.5);
    const std::vector<double> v(500, 2.0);
    EXPECT_NEAR(w1_one_sample(v, law) / mean_abs_deviation(law, 2.0), 1.0, 1e-8);
}

TEST(EmpiricalW1, TwoSampleBasics) {
    const std::vector<double> a{0.0, 1.0, 2.0}, b{1.0, 2.0, 3.0};
    EXPECT_DOUBLE_EQ(w1_two_sample(a, b), 1.0);
    EXPECT_EQ(w1_two_sample(a, a), 0.0);
    EXPECT_THROW(w1_two_sample(a, std::vector<double>{1.0}), DomainError);
}

TEST(EmpiricalW1, StableSampleAgainstItsOwnLaw) {
    const double a = 1.5;
    const std::uint64_t m = 100000;
    SampleBatch batch{DistributionSpec::pareto(a), 1, m, 0, sample_stable_sorted(a, m, 77, StreamTag::user)};
    W1Options o;
    o.seed = 3;
    const auto one = empirical_w1(batch, StableLaw(a), W1Estimator::one_sample_quantile, o);
    const auto two = empirical_w1(batch, StableLaw(a), W1Estimator::two_sample, o);
    const auto bc = empirical_w1(batch, StableLaw(a), W1Estimator::bias_corrected, o);
    EXPECT_GE(one.estimate, 0.0);
    EXPECT_LE(bc.estimate, two.estimate);
    EXPECT_EQ(two.reference_m, m);
    EXPECT_LE(std::fabs(bc.estimate), 3 * bc.std_error);
    // one-sample error is of the order of the two-sample floor
    EXPECT_LT(one.estimate, two.bias_floor_estimate + 3 * two.std_error);
}

TEST(EmpiricalW1, RefusesSmallOrUnsortedBatches) {
    SampleBatch small{DistributionSpec::pareto(1.5), 1, 50, 0, std::vector<double>(50, 0.0)};
    EXPECT_THROW(empirical_w1(small, StableLaw(1.5), W1Estimator::one_sample_quantile), DomainError);
    std::vector<double> v(200);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -static_cast<double>(i);
    SampleBatch unsorted{DistributionSpec::pareto(1.5), 1, 200, 0, v};
    EXPECT_THROW(empirical_w1(unsorted, StableLaw(1.5), W1Estimator::two_sample), DomainError);
}

TEST(FitLogLog, ExactPowerLawAndDroppedPoints) {
    const std::vector<double> x{1e2, 1e3, 1e4, 1e5};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -0.4));
    const auto f = fit_loglog(x, y);
    EXPECT_NEAR(f.slope, -0.4, 1e-13);
    EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
    y[1] = 0.0;
    const auto g = fit_loglog(x, y);
    EXPECT_TRUE(g.dropped[1]);
    EXPECT_TRUE(std::isnan(g.residuals[1]));
    EXPECT_NEAR(g.slope, -0.4, 1e-13);
    y[0] = y[2] = 0.0;
    EXPECT_THROW(fit_loglog(x, y), DomainError);
}

TEST(FitRate, NeedsFourPoints) {
    const std::vector<std::uint64_t> grid{10, 100, 1000};
    EXPECT_THROW(fit_rate(DistributionSpec::pareto(1.5), grid, 1000, 1), UsageError);
}

TEST(W1Estimator, StringRoundTrip) {
    for (auto e : {W1Estimator::one_sample_quantile, W1Estimator::two_sample, W1Estimator::bias_corrected}) {
        EXPECT_EQ(w1_estimator_from_string(to_string(e)), e);
    }
    EXPECT_THROW(w1_estimator_from_string("ks"), UsageError);
}
