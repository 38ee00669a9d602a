#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "stable_stein/errors.hpp"
#include "stable_stein/numerics.hpp"
#include "stable_stein/quadrature.hpp"

using namespace stable_stein;

TEST(GaussLegendre, ExactForPolynomials) {
    for (int order : {5, 10, 20, 40}) {
        const int deg = 2 * order - 1;
        const double v = quad::gauss_legendre([&](double x) { return std::pow(x, deg); }, 0.0, 1.0, order);
        EXPECT_NEAR(v, 1.0 / (deg + 1), 1e-14) << order;
    }
}

TEST(GaussLegendre, WeightsSumToTwo) {
    for (int order : {3, 17, 64}) {
        double s = 0.0;
        for (const auto& nd : quad::gauss_legendre_rule(order)) s += nd.w;
        EXPECT_NEAR(s, 2.0, 1e-14);
    }
}

TEST(GaussKronrod, SmoothAndPeakedIntegrands) {
    auto r = quad::gauss_kronrod([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, std::sqrt(M_PI), 1e-13);
    auto s = quad::gauss_kronrod([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12, 8000);
    EXPECT_NEAR(s.value, 2.0, 1e-9);
    auto p = quad::gauss_kronrod([](double x) { return 1e-4 / (1e-8 + (x - 0.3) * (x - 0.3)); }, 0.0, 1.0);
    EXPECT_NEAR(p.value, std::atan(0.7e4) + std::atan(0.3e4), 1e-10);
}

TEST(GaussKronrod, ReportsFailureAndIntegrateThrows) {
    auto bad = [](double x) { return std::sin(1.0 / x) / x; };
    auto r = quad::gauss_kronrod(bad, 1e-12, 1.0, 1e-15, 1e-15, 20);
    EXPECT_FALSE(r.converged);
    EXPECT_THROW(quad::integrate(bad, 1e-12, 1.0, 1e-15, 1e-15), ConvergenceError);
}

TEST(FindRoot, BracketedRoots) {
    EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0), 0.7390851332151607, 1e-14);
    EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), DomainError);
}

TEST(CompensatedSum, RecoversCancelledDigits) {
    std::vector<double> xs{1e16, 1.0, -1e16, 1.0};
    EXPECT_EQ(compensated_sum(xs), 2.0);
    CompensatedSum s;
    for (int i = 0; i < 1000000; ++i) s += 0.1;
    EXPECT_NEAR(s.value(), 100000.0, 1e-9);
}
