#include "stable_stein/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "stable_stein/errors.hpp"
#include "stable_stein/quadrature.hpp"

namespace stable_stein {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

void check_gamma_arg(long double x) {
    if (!std::isfinite(x) || x <= 0) throw DomainError("gamma_fn: argument must be positive and finite");
}

double lanczos_sum(double z) {
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[static_cast<std::size_t>(i)] / (z + i);
    return a;
}

// Gamma(x) for x >= 0.5.
double lanczos_gamma(double x) {
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * std::exp(-t) * half * lanczos_sum(z);
}

double lanczos_log_gamma(double x) {
    const double z = x - 1.0;
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
           std::log(lanczos_sum(z));
}

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Bernoulli numbers B_{2k} / (2k (2k-1)), k = 1..10.
constexpr std::array<long double, 10> kStirling = {
    1.0L / 12.0L,          -1.0L / 360.0L,        1.0L / 1260.0L,      -1.0L / 1680.0L,
    1.0L / 1188.0L,        -691.0L / 360360.0L,   1.0L / 156.0L,       -3617.0L / 122400.0L,
    43867.0L / 244188.0L,  -174611.0L / 125400.0L};

long double stirling_log_gamma(long double z) {
    // z >= 24
    long double s = (z - 0.5L) * std::log(z) - z + 0.5L * std::log(2.0L * kPiL);
    const long double z2 = z * z;
    long double zp = z;
    for (long double c : kStirling) {
        s += c / zp;
        zp *= z2;
    }
    return s;
}

// log Gamma(x) for x >= 0.5 with the product of the shift kept separately.
long double shifted_log_gamma(long double x) {
    long double prod = 1.0L;
    while (x < 24.0L) {
        prod *= x;
        x += 1.0L;
    }
    return stirling_log_gamma(x) - std::log(prod);
}

}  // namespace

double gamma_fn(double x) {
    check_gamma_arg(x);
    if (x < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    }
    return lanczos_gamma(x);
}

double log_gamma_fn(double x) {
    check_gamma_arg(x);
    if (x < 0.5) {
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_log_gamma(1.0 - x);
    }
    return lanczos_log_gamma(x);
}

long double gamma_fn(long double x) {
    check_gamma_arg(x);
    if (x < 0.5L) return kPiL / (std::sin(kPiL * x) * gamma_fn(1.0L - x));
    long double prod = 1.0L;
    while (x < 24.0L) {
        prod *= x;
        x += 1.0L;
    }
    return std::exp(stirling_log_gamma(x)) / prod;
}

long double log_gamma_fn(long double x) {
    check_gamma_arg(x);
    if (x < 0.5L) return std::log(kPiL / std::sin(kPiL * x)) - log_gamma_fn(1.0L - x);
    return shifted_log_gamma(x);
}

double beta_fn(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("beta_fn: arguments must be positive");
    }
    if (x + y < 150.0) return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y);
    return std::exp(log_gamma_fn(x) + log_gamma_fn(y) - log_gamma_fn(x + y));
}

long double beta_fn(long double x, long double y) {
    if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y)) {
        throw DomainError("beta_fn: arguments must be positive");
    }
    return std::exp(log_gamma_fn(x) + log_gamma_fn(y) - log_gamma_fn(x + y));
}

namespace {

template <class T>
T d_alpha_impl(T alpha, T pi) {
    if (!(alpha > 0) || !(alpha < 2)) throw DomainError("d_alpha: alpha must lie in (0,2)");
    return alpha * std::pow(T(2), alpha - 1) * gamma_fn((1 + alpha) / 2) /
           (std::sqrt(pi) * gamma_fn(1 - alpha / 2));
}

template <class T>
T D_alpha_impl(T alpha, T pi) {
    if (!(alpha > 1) || !(alpha < 2)) throw DomainError("D_alpha: alpha must lie in (1,2)");
    return (4 / pi) * std::sqrt((2 * alpha + 1) / alpha) * beta_fn((alpha - 1) / alpha, 2 / alpha);
}

template <class T>
T D_alpha_gamma_impl(T alpha, T gamma, T pi) {
    if (!(alpha > 1) || !(alpha < 2)) throw DomainError("D_alpha_gamma: alpha must lie in (1,2)");
    if (!(gamma > 0) || !(gamma < 1)) throw DomainError("D_alpha_gamma: gamma must lie in (0,1)");
    const T bracket = 16 / (pi * (2 - alpha)) * std::sqrt((alpha + 3) / alpha) +
                      16 / (pi * (alpha - 1)) * std::sqrt((2 * alpha + 1) / alpha);
    return d_alpha_impl(alpha, pi) / alpha * bracket *
           beta_fn((1 - gamma) / alpha, (gamma + alpha) / alpha);
}

}  // namespace

double d_alpha(double alpha) { return d_alpha_impl(alpha, std::numbers::pi); }
long double d_alpha(long double alpha) { return d_alpha_impl(alpha, kPiL); }
double D_alpha(double alpha) { return D_alpha_impl(alpha, std::numbers::pi); }
long double D_alpha(long double alpha) { return D_alpha_impl(alpha, kPiL); }
double D_alpha_gamma(double alpha, double gamma) {
    return D_alpha_gamma_impl(alpha, gamma, std::numbers::pi);
}
long double D_alpha_gamma(long double alpha, long double gamma) {
    return D_alpha_gamma_impl(alpha, gamma, kPiL);
}

double d_alpha_by_quadrature(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw DomainError("d_alpha: alpha must lie in (0,2)");
    // [0,1]: 1 - cos y = sum (-1)^(k+1) y^(2k)/(2k)!
    double head = 0.0;
    double fact = 1.0;
    for (int k = 1; k < 40; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        const double term = 1.0 / (fact * (2.0 * k - alpha));
        head += (k % 2 == 1 ? term : -term);
        if (term < 1e-20) break;
    }
    // [1, inf): y^(-1-alpha) integrates to 1/alpha; the cosine part over whole periods.
    const double s = 1.0 + alpha;
    const double pi = std::numbers::pi;
    auto osc = [s](double y) { return std::cos(y) * std::pow(y, -s); };
    double cos_part = quad::gauss_legendre(osc, 1.0, pi, 30);
    constexpr int kPeriods = 400;
    for (int k = 1; k < 2 * kPeriods; ++k) {
        cos_part += quad::gauss_legendre(osc, k * pi, (k + 1) * pi, 30);
    }
    // Tail beyond Y = 2 pi K, where sin Y = 0 and cos Y = 1, by repeated parts.
    const double Y = 2.0 * kPeriods * pi;
    double tail = 0.0;
    double coef = s;
    double power = std::pow(Y, -s - 1.0);
    for (int j = 0; j < 6; ++j) {
        tail += (j % 2 == 0 ? coef : -coef) * power;
        coef *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        power /= Y * Y;
    }
    cos_part += tail;
    const double integral = 2.0 * (head + 1.0 / alpha - cos_part);
    return 1.0 / integral;
}

double stable_tail_constant(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw DomainError("stable_tail_constant: alpha must lie in (0,2)");
    return gamma_fn(alpha) * std::sin(std::numbers::pi * alpha / 2.0) / std::numbers::pi;
}

SteinConstants SteinConstants::for_alpha(double alpha) {
    return {alpha, stable_stein::d_alpha(alpha), stable_stein::D_alpha(alpha)};
}

double SteinConstants::D_gamma(double gamma) const { return D_alpha_gamma(alpha, gamma); }

}  // namespace stable_stein
