#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle_values.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/special.hpp"
#include "stable_stein/stable_density.hpp"
#include "stable_stein/stable_table.hpp"

using namespace stable_stein;

namespace {

double total_mass(double alpha) {
    const StableLaw law(alpha);
    const double core = quad::integrate([&](double x) { return density(law, x); }, 0.0, 40.0, 1e-13, 1e-13);
    const double tail = quad::integrate(
        [&](double s) {
            const double x = 40.0 * std::exp(s);
            return density(law, x) * x;
        },
        0.0, 80.0, 1e-14, 1e-13);
    return 2.0 * (core + tail);
}

}  // namespace

TEST(Density, MatchesHighPrecisionOracle) {
    for (const auto& r : oracle::kDensity) {
        const StableLaw law(r[0]);
        EXPECT_NEAR(density(law, r[1]) / r[2], 1.0, 1e-9) << "alpha=" << r[0] << " x=" << r[1];
        EXPECT_NEAR(cdf(law, r[1]), r[3], 1e-10) << "alpha=" << r[0] << " x=" << r[1];
    }
}

TEST(Density, CauchyEndpoint) {
    const StableLaw law(1.0);
    EXPECT_NEAR(density(law, 0.0), 1.0 / M_PI, 1e-12);
    for (double x : {0.3, 1.0, 4.0, 25.0, 200.0}) {
        EXPECT_NEAR(density(law, x) * M_PI * (1.0 + x * x), 1.0, 1e-9) << x;
        EXPECT_NEAR(cdf(law, x), 0.5 + std::atan(x) / M_PI, 1e-10) << x;
    }
}

TEST(Density, IntegratesToOne) {
    for (double a : {1.1, 1.5, 1.9}) EXPECT_NEAR(total_mass(a), 1.0, 1e-8) << a;
}

TEST(Density, EvenAndPositive) {
    for (double a : {1.2, 1.7}) {
        const StableLaw law(a);
        for (double x = 0.0; x < 120.0; x += 3.7) {
            EXPECT_GT(density(law, x), 0.0);
            EXPECT_EQ(density(law, x), density(law, -x));
            EXPECT_NEAR(cdf(law, x) + cdf(law, -x), 1.0, 1e-14);
        }
    }
}

TEST(Density, ScalingRelation) {
    for (double a : {1.3, 1.8}) {
        for (double t : {0.25, 3.0}) {
            const StableLaw law(a, t);
            const StableLaw unit(a);
            const double s = std::pow(t, -1.0 / a);
            for (double x : {0.0, 0.7, 2.5, 15.0, 90.0}) {
                EXPECT_NEAR(density(law, x) / (s * density(unit, s * x)), 1.0, 1e-9) << a << " " << t << " " << x;
                EXPECT_NEAR(cdf(law, x), cdf(unit, s * x), 1e-12);
            }
        }
    }
}

TEST(Density, DerivativesMatchFiniteDifferences) {
    const StableLaw law(1.5);
    const double h = 1e-4;
    for (double x : {0.2, 1.0, 3.0, 12.0}) {
        const double d1 = (density(law, x + h) - density(law, x - h)) / (2 * h);
        const double d2 = (density(law, x + h) - 2 * density(law, x) + density(law, x - h)) / (h * h);
        EXPECT_NEAR(density_deriv(law, x, 1), d1, 1e-8);
        EXPECT_NEAR(density_deriv(law, x, 2), d2, 1e-5);
    }
    EXPECT_THROW(density_deriv(law, 1.0, 3), UsageError);
}

TEST(Density, FourierIntegralGivesDensity) {
    for (double x : {0.0, 1.5, 6.0}) {
        EXPECT_NEAR(osc_integral_I(0.0, x, 1.5) / M_PI, density(StableLaw(1.5), x), 1e-12);
    }
}

TEST(Cdf, QuantileRoundTrip) {
    for (double a : {1.1, 1.5, 1.9}) {
        const StableLaw law(a);
        for (double x = -50.0; x <= 50.0; x += 2.5) EXPECT_NEAR(quantile(law, cdf(law, x)), x, 1e-6) << a << " " << x;
    }
}

TEST(Cdf, StrictlyIncreasing) {
    const StableLaw law(1.4);
    double prev = 0.0;
    for (double x = -60.0; x <= 60.0; x += 0.5) {
        const double c = cdf(law, x);
        EXPECT_GT(c, prev);
        prev = c;
    }
}

TEST(Cdf, TailAsymptotic) {
    for (double a : {1.2, 1.5, 1.8}) {
        const StableLaw law(a);
        const double c = stable_tail_constant(a);
        double prev = 1.0;
        for (double x : {50.0, 500.0, 5000.0}) {
            const double rel = std::fabs(survival(law, x) / (c * std::pow(x, -a)) - 1.0);
            EXPECT_LT(rel, prev);
            prev = rel;
        }
        EXPECT_LT(prev, 1e-3);
    }
}

TEST(Cdf, TailSeriesContinuousAtSwitch) {
    for (double a : {1.1, 1.5, 1.9}) {
        const StableLaw law(a);
        const double x = kTailSwitch;
        EXPECT_NEAR(survival_tail_series(a, x) / survival(law, x * (1 - 1e-12)), 1.0, 1e-8);
        EXPECT_NEAR(density_tail_series(a, x) / density(law, x * (1 - 1e-12)), 1.0, 1e-8);
    }
}

TEST(Moments, MeanAbsMatchesOracle) {
    for (const auto& r : oracle::kMeanAbs) {
        const StableLaw law(r[0]);
        EXPECT_NEAR(mean_abs(law) / r[1], 1.0, 1e-13);
        EXPECT_NEAR(mean_abs_deviation(law, 0.0) / r[1], 1.0, 1e-8);
    }
    EXPECT_THROW(mean_abs(StableLaw(1.0)), DomainError);
}

TEST(Moments, PartialExpectationDerivativeIsSurvival) {
    const StableLaw law(1.6);
    const double h = 1e-4;
    for (double y : {-3.0, 0.0, 0.8, 7.0, 60.0}) {
        const double d = (upper_partial_expectation(law, y + h) - upper_partial_expectation(law, y - h)) / (2 * h);
        EXPECT_NEAR(-d, survival(law, y), 1e-7) << y;
    }
}

TEST(HeatKernel, BoundsHoldOnGrid) {
    std::vector<double> grid;
    for (int i = 0; i < 60; ++i) grid.push_back(-30.0 + i * 1.0171);
    for (double a : {1.1, 1.5, 1.9}) EXPECT_GE(verify_hk_bounds(a, grid).min_margin(), -1e-6) << a;
}

TEST(StableTable, AgreesWithDirectEvaluation) {
    for (double a : {1.2, 1.5, 1.9}) {
        const StableTable tab(a);
        const StableLaw law(a);
        for (double x = -45.0; x <= 45.0; x += 1.37) {
            EXPECT_NEAR(tab.survival(x), survival(law, x), 1e-10) << a << " " << x;
            EXPECT_NEAR(tab.upper_partial_expectation(x), upper_partial_expectation(law, x), 1e-9) << a << " " << x;
        }
        for (double u : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999}) {
            EXPECT_NEAR(tab.cdf(tab.quantile(u)), u, 1e-12);
        }
        EXPECT_NEAR(tab.tail_constant(), stable_tail_constant(a), 1e-15);
    }
}

TEST(StableTable, SharedInstanceIsReused) {
    EXPECT_EQ(StableTable::shared(1.5).get(), StableTable::shared(1.5).get());
}

TEST(StableLaw, RejectsBadParameters) {
    EXPECT_THROW(StableLaw(0.0), DomainError);
    EXPECT_THROW(StableLaw(2.5), DomainError);
    EXPECT_THROW(StableLaw(1.5, -1.0), DomainError);
}
