#include "stable_stein/stable_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stable_stein/errors.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEnvelopeLog = 39.0;  // exp(-39) ~ 1e-17

void check_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw DomainError("stable law: alpha must lie in (0,2)");
}

// Cut-off where lambda^theta exp(-s lambda^alpha) falls below exp(-39).
double lambda_max(double alpha, double s, double theta) {
    double L = std::pow(kEnvelopeLog / s, 1.0 / alpha);
    if (theta > 0.0) {
        for (int i = 0; i < 8; ++i) {
            L = std::pow((kEnvelopeLog + theta * std::log(std::max(L, 1.0))) / s, 1.0 / alpha);
        }
    }
    return L;
}

// int_0^L lambda^theta h(lambda) d lambda, with h oscillating at frequency |x|.
// Panels follow half periods; the first panel takes lambda = u^(1/(1+theta)) when theta < 0.
template <class H>
double panel_integral(H&& h, double theta, double x, double L) {
    const double ax = std::fabs(x);
    double width = ax > 0.0 ? kPi / ax : L;
    width = std::min(width, L / 8.0);
    const double tol = 1e-15;

    double first_end = std::min(width, L);
    double total;
    if (theta < 0.0) {
        const double e = 1.0 + theta;
        auto g = [&](double u) { return h(std::pow(u, 1.0 / e)); };
        auto r = quad::gauss_kronrod(g, 0.0, std::pow(first_end, e), tol, 1e-13);
        total = r.value / e;
    } else if (theta == 0.0) {
        total = quad::gauss_kronrod(h, 0.0, first_end, tol, 1e-13).value;
    } else {
        auto g = [&](double lam) { return std::pow(lam, theta) * h(lam); };
        total = quad::gauss_kronrod(g, 0.0, first_end, tol, 1e-13).value;
    }

    auto g = [&](double lam) { return (theta == 0.0 ? 1.0 : std::pow(lam, theta)) * h(lam); };
    double a = first_end;
    double comp = 0.0;
    while (a < L) {
        const double b = std::min(a + width, L);
        const double v = quad::gauss_kronrod(g, a, b, tol, 1e-13).value;
        const double t = total + v;
        comp += std::fabs(total) >= std::fabs(v) ? (total - t) + v : (v - t) + total;
        total = t;
        a = b;
    }
    return total + comp;
}

double I_scaled(double theta, double x, double alpha, double s) {
    const double L = lambda_max(alpha, s, theta);
    auto h = [=](double lam) { return std::exp(-s * std::pow(lam, alpha)) * std::cos(lam * x); };
    return panel_integral(h, theta, x, L);
}

double J_scaled(double theta, double x, double alpha, double s) {
    const double L = lambda_max(alpha, s, theta);
    auto h = [=](double lam) { return std::exp(-s * std::pow(lam, alpha)) * std::sin(lam * x); };
    return panel_integral(h, theta, x, L);
}

// (1/pi) sum_k (-1)^(k+1)/k! Gamma(alpha k + 1 + j) sin(k pi alpha / 2) x^(-alpha k - 1 - j)
// truncated at its smallest term. j = -1 gives the survival function, j = -2 the partial mean.
double tail_series(double alpha, double x, int j) {
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    const double lx = std::log(x);
    for (int k = 1; k <= 80; ++k) {
        const double arg = alpha * k + 1.0 + j;
        if (arg <= 0.0) continue;
        const double mag = std::exp(log_gamma_fn(arg) - std::lgamma(k + 1.0) - (alpha * k + 1.0 + j) * lx);
        if (mag > prev) break;
        prev = mag;
        const double term = (k % 2 == 1 ? 1.0 : -1.0) * mag * std::sin(k * kPi * alpha / 2.0);
        sum += term;
        if (mag < 1e-18 * std::fabs(sum)) break;
    }
    return sum / kPi;
}

double unit_x(const StableLaw& law, double x) { return x * std::pow(law.scale, -1.0 / law.alpha); }

double unit_factor(const StableLaw& law) { return std::pow(law.scale, 1.0 / law.alpha); }

}  // namespace

StableLaw::StableLaw(double alpha_, double scale_) : alpha(alpha_), scale(scale_) { validate(); }

void StableLaw::validate() const {
    check_alpha(alpha);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("stable law: scale must be positive");
}

double osc_integral_I(double theta, double x, double alpha) {
    check_alpha(alpha);
    if (!(theta > -1.0)) throw DomainError("osc_integral_I: theta must exceed -1");
    return I_scaled(theta, x, alpha, 1.0);
}

double osc_integral_J(double theta, double x, double alpha) {
    check_alpha(alpha);
    if (!(theta > -1.0)) throw DomainError("osc_integral_J: theta must exceed -1");
    return J_scaled(theta, x, alpha, 1.0);
}

double density_tail_series(double alpha, double x) { return tail_series(alpha, std::fabs(x), 0); }
double survival_tail_series(double alpha, double x) { return tail_series(alpha, x, -1); }
double partial_expectation_tail_series(double alpha, double x) { return tail_series(alpha, x, -2); }

double density(const StableLaw& law, double x) {
    law.validate();
    const double ux = unit_x(law, x);
    if (std::fabs(ux) > kTailSwitch) return tail_series(law.alpha, std::fabs(ux), 0) / unit_factor(law);
    return I_scaled(0.0, x, law.alpha, law.scale) / kPi;
}

double density_deriv(const StableLaw& law, double x, int order) {
    law.validate();
    if (order != 1 && order != 2) throw UsageError("density_deriv: order must be 1 or 2");
    const double ux = unit_x(law, x);
    if (std::fabs(ux) > kTailSwitch) {
        const double f = unit_factor(law);
        const double v = tail_series(law.alpha, std::fabs(ux), order) / std::pow(f, order + 1);
        if (order == 1) return ux > 0.0 ? -v : v;
        return v;
    }
    if (order == 1) return -J_scaled(1.0, x, law.alpha, law.scale) / kPi;
    return -I_scaled(2.0, x, law.alpha, law.scale) / kPi;
}

double survival(const StableLaw& law, double x) {
    law.validate();
    if (x < 0.0) return 1.0 - survival(law, -x);
    if (x == 0.0) return 0.5;
    const double ux = unit_x(law, x);
    if (ux > kTailSwitch) return tail_series(law.alpha, ux, -1);
    const double s = law.scale;
    const double alpha = law.alpha;
    const double L = lambda_max(alpha, s, 0.0);
    auto h = [=](double lam) {
        const double e = std::exp(-s * std::pow(lam, alpha));
        return lam == 0.0 ? e * x : e * std::sin(lam * x) / lam;
    };
    return 0.5 - panel_integral(h, 0.0, x, L) / kPi;
}

double cdf(const StableLaw& law, double x) {
    if (x > 0.0) return 1.0 - survival(law, x);
    return survival(law, -x);
}

double quantile(const StableLaw& law, double u) {
    law.validate();
    if (!(u > 0.0) || !(u < 1.0)) throw DomainError("quantile: u must lie strictly inside (0,1)");
    if (u == 0.5) return 0.0;
    const double v = std::min(u, 1.0 - u);
    const double sign = u > 0.5 ? 1.0 : -1.0;
    // Bracket [lo, hi] for survival(x) = v on x > 0.
    double lo = 0.0;
    double hi = std::pow(stable_tail_constant(law.alpha) / v, 1.0 / law.alpha) * unit_factor(law) + 1.0;
    while (survival(law, hi) > v) {
        lo = hi;
        hi *= 2.0;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = survival(law, x) - v;
        if (f > 0.0) lo = x; else hi = x;
        const double p = density(law, x);
        double next = x + f / p;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-14 * std::max(1.0, std::fabs(x)) || hi - lo <= 1e-15 * hi) {
            return sign * next;
        }
        x = next;
    }
    throw ConvergenceError("quantile: Newton iteration did not settle", sign * x, hi - lo);
}

double mean_abs(const StableLaw& law) {
    law.validate();
    if (!(law.alpha > 1.0)) throw DomainError("mean_abs: E|X| is infinite for alpha <= 1");
    return 2.0 / kPi * gamma_fn(1.0 - 1.0 / law.alpha) * unit_factor(law);
}

double mean_abs_deviation(const StableLaw& law, double y) {
    law.validate();
    if (!(law.alpha > 1.0)) throw DomainError("mean_abs_deviation: requires alpha > 1");
    const double uy = unit_x(law, y);
    if (std::fabs(uy) > kTailSwitch) {
        return std::fabs(y) + 2.0 * unit_factor(law) * tail_series(law.alpha, std::fabs(uy), -2);
    }
    if (y == 0.0) return mean_abs(law);
    const double s = law.scale;
    const double alpha = law.alpha;
    const double L = lambda_max(alpha, s, 0.0);
    // (1 - e^{-s l^a} cos(l y)) / l^a, written to avoid cancellation near 0.
    auto h = [=](double lam) {
        if (lam == 0.0) return s;
        const double la = std::pow(lam, alpha);
        const double e = std::exp(-s * la);
        const double sh = std::sin(0.5 * lam * y);
        return (-std::expm1(-s * la) + 2.0 * e * sh * sh) / la;
    };
    const double body = panel_integral(h, alpha - 2.0, y, L);
    return 2.0 / kPi * (body + 1.0 / L);
}

double upper_partial_expectation(const StableLaw& law, double y) {
    law.validate();
    const double uy = unit_x(law, y);
    if (uy > kTailSwitch) return unit_factor(law) * tail_series(law.alpha, uy, -2);
    if (uy < -kTailSwitch) return -y + unit_factor(law) * tail_series(law.alpha, -uy, -2);
    return 0.5 * (mean_abs_deviation(law, y) - y);
}

double HeatKernelMargins::min_margin() const {
    return std::min(std::min(first_uniform, first_decay), std::min(second_uniform, second_decay));
}

HeatKernelMargins verify_hk_bounds(double alpha, std::span<const double> x_grid) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw DomainError("verify_hk_bounds: alpha must lie in (1,2)");
    const StableLaw law(alpha);
    const double inf = std::numeric_limits<double>::infinity();
    HeatKernelMargins m{alpha, inf, inf, inf, inf};
    for (double x : x_grid) {
        if (!std::isfinite(x)) continue;
        const double d1 = std::fabs(density_deriv(law, x, 1));
        const double d2 = std::fabs(density_deriv(law, x, 2));
        m.first_uniform = std::min(m.first_uniform, 1.0 / (alpha * kPi) - d1);
        m.second_uniform = std::min(m.second_uniform, 2.0 / (alpha * kPi) - d2);
        if (x != 0.0) {
            m.first_decay = std::min(m.first_decay, (2.0 * alpha + 1.0) / (kPi * x * x) - d1);
            m.second_decay = std::min(m.second_decay, (2.0 * alpha + 6.0) / (kPi * x * x) - d2);
        }
    }
    return m;
}

}  // namespace stable_stein
