#pragma once

#include <span>
#include <vector>

namespace stable_stein {

// Symmetric alpha-stable law with characteristic function exp(-scale |lambda|^alpha).
// scale plays the role of the time t in p(t, x).
struct StableLaw {
    double alpha = 1.5;
    double scale = 1.0;

    StableLaw() = default;
    explicit StableLaw(double alpha_, double scale_ = 1.0);
    void validate() const;
};

// I_theta(x) = int_0^inf lambda^theta exp(-lambda^alpha) cos(lambda x) d lambda, theta > -1.
double osc_integral_I(double theta, double x, double alpha);
// J_theta(x) = same with sin(lambda x).
double osc_integral_J(double theta, double x, double alpha);

// Fourier inversion p = I_0/pi with the law's scale carried inside the exponent.
double density(const StableLaw& law, double x);
double density_deriv(const StableLaw& law, double x, int order);
double cdf(const StableLaw& law, double x);
double survival(const StableLaw& law, double x);
double quantile(const StableLaw& law, double u);

// E|X - y| for alpha > 1.
double mean_abs_deviation(const StableLaw& law, double y);
// E (X - y)^+ = integral of P(X > r) over r > y.
double upper_partial_expectation(const StableLaw& law, double y);
// E|X| = (2/pi) Gamma(1 - 1/alpha) scale^(1/alpha).
double mean_abs(const StableLaw& law);

// Tail expansions for large |x| (unit scale). Exposed for tests.
double density_tail_series(double alpha, double x);
double survival_tail_series(double alpha, double x);
double partial_expectation_tail_series(double alpha, double x);

// Switch point (unit scale) from Fourier inversion to tail series.
inline constexpr double kTailSwitch = 40.0;

struct HeatKernelMargins {
    double alpha;
    // bound - |computed| minimised over the grid, one per inequality:
    // |p'| <= 1/(alpha pi), |p'| <= (2 alpha + 1)/(pi x^2),
    // |p''| <= 2/(alpha pi), |p''| <= (2 alpha + 6)/(pi x^2).
    double first_uniform;
    double first_decay;
    double second_uniform;
    double second_decay;
    double min_margin() const;
};

HeatKernelMargins verify_hk_bounds(double alpha, std::span<const double> x_grid);

}  // namespace stable_stein
