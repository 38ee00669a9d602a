#pragma once

#include <memory>
#include <vector>

#include "stable_stein/stable_density.hpp"

namespace stable_stein {

// Cached unit-scale survival function and partial mean on [0, kTailSwitch],
// interpolated by cubic Hermite polynomials with exact derivatives, and tail
// series beyond. Immutable after construction.
class StableTable {
public:
    explicit StableTable(double alpha, double step = 0.01);

    // Process-wide table for alpha with the default step. Built on first use.
    static std::shared_ptr<const StableTable> shared(double alpha);

    double alpha() const { return alpha_; }
    double step() const { return h_; }

    double survival(double x) const;
    double cdf(double x) const;
    // E (X - y)^+
    double upper_partial_expectation(double y) const;
    double quantile(double u) const;
    // Inverse survival function for v in (0, 1/2]: x >= 0 with P(X > x) = v.
    double survival_quantile(double v) const;
    // Tail constant c_alpha with P(X > x) ~ c_alpha x^-alpha.
    double tail_constant() const { return c_alpha_; }

private:
    double survival_pos(double x) const;
    double partial_pos(double x) const;

    double alpha_;
    double h_;
    double c_alpha_;
    double s_edge_;
    std::vector<double> s_;  // survival at nodes
    std::vector<double> p_;  // density at nodes
    std::vector<double> m_;  // partial mean at nodes
};

}  // namespace stable_stein
