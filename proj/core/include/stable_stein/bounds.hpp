#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "stable_stein/distribution.hpp"
#include "stable_stein/kernels.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

struct BoundOptions {
    KernelBackend backend = KernelBackend::closed_form;
    // Scale sigma of the target law; every term is multiplied by sigma^(1/alpha).
    double scale = 1.0;
};

struct SteinBoundReport {
    double alpha = 0.0;
    double gamma = 0.0;
    double n = 0.0;
    double N = 0.0;
    double discrepancy_term = 0.0;
    double truncation_term = 0.0;
    double N_term = 0.0;
    double gamma_term = 0.0;
    double total = 0.0;
    double rate_exponent = 0.0;
    bool has_log_factor = false;
};

// W1 bound of the main theorem for i.i.d. summands:
// D_alpha * discrepancy + 2 n E|zeta| 1{|zeta| > N} + 4 d_alpha/((alpha-1) N^(alpha-1))
// + D_{alpha,gamma} ell_n^(-gamma/alpha) E|xi - E xi|^gamma. N may be +inf.
SteinBoundReport bound_main(const DistributionSpec& spec, double alpha, double n, double N, double gamma,
                            const BoundOptions& opts = {});

// Bound under the (i')/(ii') tail model with the delta_n remainder (symmetric form when E xi = 0).
SteinBoundReport bound_mthm2(const TailModel& model, double alpha, double n, double N, double gamma,
                             const BoundOptions& opts = {});

// Symmetric remainder 4 d_alpha((alpha+1)/(alpha-1) + M2(x) + int_1^inf M2(x r) r^-alpha dr) N^(1-alpha),
// x = ell_n^(1/alpha) N, and its delta_n generalization. The M2 integral is by quadrature.
double mthm2_remainder(const TailModel& model, double n, double N);

struct RateOrder {
    bool classified = false;
    double exponent = 0.0;
    bool has_log_factor = false;
    // true when the exponent applies to log n rather than n.
    bool log_scale = false;
};

RateOrder rate_order(const DistributionSpec& spec, double alpha);

struct Example2Result {
    int case_id = 0;  // 1: beta > 2, 2: beta = 2, 3: alpha < beta < 2
    double q = 0.0;   // N = ell_n^q when N is chosen automatically
    double ell = 0.0;
    double leading_coefficient = 0.0;
    double leading_term = 0.0;
    double remainder = 0.0;
    SteinBoundReport report;
};

// ModifiedPareto closed forms with the triangle-inequality discrepancy bound.
// N = nullopt picks N = inf (beta > 2) or N = ell_n^q (beta <= 2). With an explicit N
// the leading term is the discrepancy part and the remainder is everything else.
Example2Result example2_bound(double A, double B, double alpha, double beta, double gamma, double n,
                              std::optional<double> N = std::nullopt);

// Pareto with N = inf in closed form:
// D_alpha/(2-alpha) (2d/alpha)^(2/alpha) n^-((2-alpha)/alpha)
// + alpha D_{alpha,gamma}/(alpha-gamma) (2d/alpha)^(gamma/alpha) n^(-gamma/alpha).
template <class T>
T example1_total(T alpha, T gamma, T n) {
    using std::pow;
    const T d = d_alpha(alpha);
    const T c = 2 * d / alpha;
    return D_alpha(alpha) / (2 - alpha) * pow(c, 2 / alpha) * pow(n, -(2 - alpha) / alpha) +
           alpha * D_alpha_gamma(alpha, gamma) / (alpha - gamma) * pow(c, gamma / alpha) * pow(n, -gamma / alpha);
}

struct GammaOptimum {
    double gamma_star = 0.0;
    double total_star = 0.0;
};

// Grid of 99 points on [0.01, 0.99] followed by golden-section refinement around the best
// grid point. Ties go to the smaller gamma.
GammaOptimum optimize_gamma(const std::function<double(double)>& total_of_gamma);
GammaOptimum optimize_gamma_grid(const std::function<double(double)>& total_of_gamma,
                                 std::span<const double> grid);
GammaOptimum optimize_gamma(const DistributionSpec& spec, double alpha, double n, double N,
                            const BoundOptions& opts = {});

struct NOptimum {
    double N_star = 0.0;
    double total_star = 0.0;
};

// Log-spaced grid on [N_lo, N_hi] then golden-section in log N.
NOptimum optimize_N(const DistributionSpec& spec, double alpha, double n, double gamma, double N_lo,
                    double N_hi, const BoundOptions& opts = {});

// Solves n / A^alpha = 1/(K0 (log A)^beta) for A > max(x0, e). beta = 0 gives (K0 n)^(1/alpha).
double log_example_A_n(double K0, double x0, double alpha, double beta, double n);

}  // namespace stable_stein
