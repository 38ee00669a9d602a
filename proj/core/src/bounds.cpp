#include "stable_stein/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "stable_stein/errors.hpp"
#include "stable_stein/quadrature.hpp"

namespace stable_stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_common(double alpha, double n, double N, double gamma) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw DomainError("bound: alpha must lie in (1,2)");
    if (!(gamma > 0.0) || !(gamma < 1.0)) throw DomainError("bound: gamma must lie in (0,1)");
    if (!(n >= 1.0) || !std::isfinite(n)) throw DomainError("bound: n must be a positive integer");
    if (!(N > 0.0)) throw DomainError("bound: N must be positive");
}

void check_alpha_matches(double alpha, double spec_alpha) {
    if (std::fabs(alpha - spec_alpha) > 1e-12) {
        throw DomainError("bound: alpha does not match the spec's alpha");
    }
}

// int_delta^inf M2(r x) r^-alpha dr in log coordinates r = delta e^u.
double m2_tail_integral(const PowerSeries& M2, double alpha, double x, double delta) {
    if (M2.empty()) return 0.0;
    const double decay = alpha - 1.0 + M2.min_power();
    const double U = 80.0 / decay;
    auto f = [&](double u) {
        const double r = delta * std::exp(u);
        return M2(r * x) * std::pow(r, 1.0 - alpha);
    };
    return quad::integrate(f, 0.0, U, 0.0, 1e-12);
}

void apply_scale(SteinBoundReport& r, double alpha, double scale) {
    if (scale == 1.0) return;
    if (!(scale > 0.0)) throw DomainError("bound: scale must be positive");
    const double f = std::pow(scale, 1.0 / alpha);
    r.discrepancy_term *= f;
    r.truncation_term *= f;
    r.N_term *= f;
    r.gamma_term *= f;
    r.total *= f;
}

void set_rate(SteinBoundReport& r, const RateOrder& ro) {
    r.rate_exponent = ro.classified ? ro.exponent : kNaN;
    r.has_log_factor = ro.has_log_factor;
}

RateOrder modified_pareto_rate(double alpha, double beta, double B) {
    RateOrder r;
    r.classified = true;
    const double base = (alpha - 2.0) / alpha;
    if (B == 0.0 || beta > 2.0 + 1e-12) {
        r.exponent = base;
    } else if (std::fabs(beta - 2.0) <= 1e-12) {
        r.exponent = base;
        r.has_log_factor = true;
    } else {
        r.exponent = -(alpha - 1.0) * (beta - alpha) / (alpha * (1.0 + alpha - beta));
    }
    return r;
}

double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

}  // namespace

SteinBoundReport bound_main(const DistributionSpec& spec, double alpha, double n, double N, double gamma,
                            const BoundOptions& opts) {
    check_common(alpha, n, N, gamma);
    check_alpha_matches(alpha, spec.alpha());
    const double d = d_alpha(alpha);
    const double ell = spec.ell(n);
    const double la = std::pow(ell, 1.0 / alpha);

    SteinBoundReport r;
    r.alpha = alpha;
    r.gamma = gamma;
    r.n = n;
    r.N = N;
    r.discrepancy_term = discrepancy_l1(spec, n, N, opts.backend);
    if (!std::isinf(N)) {
        r.truncation_term = 2.0 * n / la * spec.centered_truncated_first_moment(la * N);
        r.N_term = 4.0 * d / ((alpha - 1.0) * std::pow(N, alpha - 1.0));
    }
    r.gamma_term = D_alpha_gamma(alpha, gamma) * std::pow(ell, -gamma / alpha) * spec.abs_centered_moment(gamma);
    r.total = D_alpha(alpha) * r.discrepancy_term + r.truncation_term + r.N_term + r.gamma_term;
    set_rate(r, rate_order(spec, alpha));
    apply_scale(r, alpha, opts.scale);
    return r;
}

double mthm2_remainder(const TailModel& model, double n, double N) {
    if (std::isinf(N)) return 0.0;
    const double alpha = model.alpha();
    const double d = d_alpha(alpha);
    const double delta = model.delta_n(n, N);
    if (!(delta > 0.0)) {
        const double N_min = std::pow(model.ell(n), -1.0 / alpha) * std::fabs(model.mean());
        std::ostringstream msg;
        msg << "bound_mthm2: delta_n <= 0; N must exceed " << N_min;
        throw DomainError(msg.str());
    }
    const double x = std::pow(model.ell(n), 1.0 / alpha) * N;
    const PowerSeries& M2 = model.M2();
    const double NN = std::pow(N, 1.0 - alpha);
    if (model.mean() == 0.0) {
        return 4.0 * d * ((alpha + 1.0) / (alpha - 1.0) + M2(x) + m2_tail_integral(M2, alpha, x, 1.0)) * NN;
    }
    const double da = std::pow(delta, alpha - 1.0);
    const double inner = (1.0 + da) / (alpha - 1.0) + 1.0 / delta + M2(x * delta) / delta +
                         da * m2_tail_integral(M2, alpha, x, delta);
    return 4.0 * d / da * inner * NN;
}

SteinBoundReport bound_mthm2(const TailModel& model, double alpha, double n, double N, double gamma,
                             const BoundOptions& opts) {
    check_common(alpha, n, N, gamma);
    check_alpha_matches(alpha, model.alpha());
    const DistributionSpec spec = DistributionSpec::general_tail(model);
    const double d = d_alpha(alpha);
    const double ell = model.ell(n);

    SteinBoundReport r;
    r.alpha = alpha;
    r.gamma = gamma;
    r.n = n;
    r.N = N;
    const double R = mthm2_remainder(model, n, N);
    KernelBackend backend = opts.backend == KernelBackend::monte_carlo ? KernelBackend::quadrature : opts.backend;
    r.discrepancy_term = discrepancy_l1(spec, n, N, backend);
    if (!std::isinf(N)) {
        r.N_term = 4.0 * d / (alpha - 1.0) * std::pow(N, 1.0 - alpha);
        r.truncation_term = R - r.N_term;
    }
    r.gamma_term = D_alpha_gamma(alpha, gamma) * std::pow(ell, -gamma / alpha) * spec.abs_centered_moment(gamma);
    r.total = D_alpha(alpha) * r.discrepancy_term + r.truncation_term + r.N_term + r.gamma_term;
    set_rate(r, rate_order(spec, alpha));
    apply_scale(r, alpha, opts.scale);
    return r;
}

RateOrder rate_order(const DistributionSpec& spec, double alpha) {
    check_alpha_matches(alpha, spec.alpha());
    switch (spec.kind()) {
        case SpecKind::pareto: return modified_pareto_rate(alpha, 2.0 * alpha + 2.0, 0.0);
        case SpecKind::modified_pareto:
        case SpecKind::hall: {
            const auto mp = *spec.as_modified_pareto();
            return modified_pareto_rate(alpha, mp.beta, mp.B);
        }
        case SpecKind::general_tail: {
            const auto& tm = std::get<TailModel>(spec.variant());
            const double p = (tm.M1() + tm.M2()).empty() ? kInf : (tm.M1() + tm.M2()).min_power();
            if (std::isinf(p)) return modified_pareto_rate(alpha, 2.0 * alpha + 2.0, 0.0);
            return modified_pareto_rate(alpha, alpha + p, 1.0);
        }
        case SpecKind::log_pareto: {
            RateOrder r;
            r.classified = true;
            r.exponent = -(1.0 - 1.0 / alpha);
            r.log_scale = true;
            return r;
        }
    }
    return {};
}

Example2Result example2_bound(double A, double B, double alpha, double beta, double gamma, double n,
                              std::optional<double> N_opt) {
    if (!(beta > alpha)) throw DomainError("example2_bound: beta must exceed alpha");
    if (!(A > 0.0) || !(B >= 0.0)) throw DomainError("example2_bound: A must be positive and B nonnegative");
    if (std::fabs(A / alpha + B / beta - 1.0) > 1e-10) {
        throw DomainError("example2_bound: A/alpha + B/beta must equal 1");
    }
    check_common(alpha, n, N_opt.value_or(kInf), gamma);
    const double d = d_alpha(alpha);
    const double Da = D_alpha(alpha);
    const double ell = A / (2.0 * d) * n;
    const double lead_pow = std::pow(ell, (alpha - 2.0) / alpha);

    Example2Result out;
    out.ell = ell;
    const bool beta_is_2 = std::fabs(beta - 2.0) <= 1e-9;
    out.case_id = beta_is_2 ? 2 : (beta > 2.0 ? 1 : 3);
    if (out.case_id == 2) out.q = (2.0 - alpha) / (alpha * (alpha - 1.0));
    if (out.case_id == 3) out.q = (beta - alpha) / (alpha * (alpha + 1.0 - beta));
    // Work with log N: the automatic choice ell_n^q overflows for alpha near 1.
    const double logN = N_opt ? std::log(*N_opt) : (out.case_id == 1 ? kInf : out.q * std::log(ell));
    const bool N_inf = std::isinf(logN);
    auto Npow = [&](double e) { return std::exp(e * logN); };
    if (N_inf && !(beta > 2.0)) throw DomainError("example2_bound: N = inf requires beta > 2");

    double T = 2.0 * d * lead_pow / (2.0 - alpha);
    if (B > 0.0) {
        if (N_inf) {
            T += 2.0 * B * d / (A * (beta - 2.0)) * lead_pow;
        } else if (beta_is_2) {
            T += 2.0 * B * d / A * lead_pow * (logN + std::log(ell) / alpha);
        } else {
            T += 2.0 * B * d / (A * (beta - 2.0)) *
                 (lead_pow - std::exp((alpha - beta) / alpha * std::log(ell) + (2.0 - beta) * logN));
        }
    }

    SteinBoundReport& r = out.report;
    r.alpha = alpha;
    r.gamma = gamma;
    r.n = n;
    r.N = N_inf ? kInf : std::exp(logN);
    r.discrepancy_term = T / alpha;
    r.gamma_term = D_alpha_gamma(alpha, gamma) * (A / (alpha - gamma) + B / (beta - gamma)) *
                   std::pow(ell, -gamma / alpha);
    if (!N_inf) {
        const double NN = Npow(1.0 - alpha);
        const double R = 4.0 * d *
                         ((alpha + 1.0) / (alpha - 1.0) +
                          B * alpha / (A * (beta - 1.0)) *
                              std::exp((alpha - beta) / alpha * std::log(ell) + (alpha - beta) * logN)) *
                         NN;
        r.N_term = 4.0 * d / (alpha - 1.0) * NN;
        r.truncation_term = R - r.N_term;
    }
    r.total = Da * r.discrepancy_term + r.truncation_term + r.N_term + r.gamma_term;
    set_rate(r, modified_pareto_rate(alpha, beta, B));

    if (N_opt) {
        out.leading_term = Da * r.discrepancy_term;
        out.leading_coefficient = out.leading_term / lead_pow;
    } else if (out.case_id == 1) {
        out.leading_coefficient = 2.0 * d * Da / alpha * (1.0 / (2.0 - alpha) + B / (A * (beta - 2.0)));
        out.leading_term = out.leading_coefficient * lead_pow;
    } else if (out.case_id == 2) {
        out.leading_coefficient = 2.0 * d * Da * B * (alpha * out.q + 1.0) / (alpha * alpha * A);
        out.leading_term = out.leading_coefficient * lead_pow * std::log(ell);
    } else {
        out.leading_coefficient =
            2.0 * d * (Da * B / (A * alpha * (2.0 - beta)) + 2.0 * (alpha + 1.0) / (alpha - 1.0));
        out.leading_term = out.leading_coefficient * std::pow(ell, -(alpha - 1.0) * out.q);
    }
    out.remainder = r.total - out.leading_term;
    return out;
}

GammaOptimum optimize_gamma_grid(const std::function<double(double)>& total_of_gamma,
                                 std::span<const double> grid) {
    if (grid.empty()) throw UsageError("optimize_gamma: empty grid");
    GammaOptimum best{grid[0], total_of_gamma(grid[0])};
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = total_of_gamma(grid[i]);
        if (v < best.total_star || (v == best.total_star && grid[i] < best.gamma_star)) best = {grid[i], v};
    }
    return best;
}

GammaOptimum optimize_gamma(const std::function<double(double)>& total_of_gamma) {
    std::vector<double> grid(99);
    for (int i = 0; i < 99; ++i) grid[i] = 0.01 * (i + 1);
    const GammaOptimum coarse = optimize_gamma_grid(total_of_gamma, grid);
    const double lo = std::max(0.01, coarse.gamma_star - 0.01);
    const double hi = std::min(0.99, coarse.gamma_star + 0.01);
    const double g = golden_section(total_of_gamma, lo, hi, 1e-9);
    const double v = total_of_gamma(g);
    if (v < coarse.total_star) return {g, v};
    return coarse;
}

GammaOptimum optimize_gamma(const DistributionSpec& spec, double alpha, double n, double N,
                            const BoundOptions& opts) {
    // Only the gamma term depends on gamma; assemble the rest once.
    SteinBoundReport base = bound_main(spec, alpha, n, N, 0.5, opts);
    const double fixed = base.total - base.gamma_term;
    const double ell = spec.ell(n);
    const double s = std::pow(opts.scale, 1.0 / alpha);
    auto f = [&](double g) {
        return fixed + s * D_alpha_gamma(alpha, g) * std::pow(ell, -g / alpha) * spec.abs_centered_moment(g);
    };
    return optimize_gamma(f);
}

NOptimum optimize_N(const DistributionSpec& spec, double alpha, double n, double gamma, double N_lo,
                    double N_hi, const BoundOptions& opts) {
    if (!(N_lo > 0.0) || !(N_hi > N_lo) || std::isinf(N_hi)) {
        throw UsageError("optimize_N: need 0 < N_lo < N_hi < inf");
    }
    auto f = [&](double logN) { return bound_main(spec, alpha, n, std::exp(logN), gamma, opts).total; };
    const int K = 61;
    const double a = std::log(N_lo), b = std::log(N_hi);
    const double h = (b - a) / (K - 1);
    int best = 0;
    double best_v = f(a);
    for (int i = 1; i < K; ++i) {
        const double v = f(a + i * h);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    const double lo = a + std::max(0, best - 1) * h;
    const double hi = a + std::min(K - 1, best + 1) * h;
    const double x = golden_section(f, lo, hi, 1e-6);
    const double v = f(x);
    if (v < best_v) return {std::exp(x), v};
    return {std::exp(a + best * h), best_v};
}

double log_example_A_n(double K0, double x0, double alpha, double beta, double n) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw DomainError("log_example_A_n: alpha must lie in (0,2)");
    if (!(K0 > 0.0) || !(n > 0.0)) throw DomainError("log_example_A_n: K0 and n must be positive");
    if (beta == 0.0) return std::pow(K0 * n, 1.0 / alpha);
    if (!(x0 > 1.0)) throw DomainError("log_example_A_n: x0 must exceed 1");
    // y = log A solves h(y) = alpha y - beta log y = log(K0 n); h is increasing for y > beta/alpha.
    const double target = std::log(K0 * n);
    auto h = [&](double y) { return alpha * y - beta * std::log(y) - target; };
    double lo = std::max({std::log(x0), 1.0, beta / alpha});
    if (h(lo) >= 0.0) {
        throw DomainError("log_example_A_n: n too small, A_n would not exceed max(x0, e)");
    }
    double hi = 2.0 * lo;
    while (h(hi) < 0.0) hi *= 2.0;
    double y = 0.5 * (lo + hi);
    std::ostringstream trace;
    trace.precision(17);
    for (int it = 0; it < 200; ++it) {
        const double v = h(y);
        trace << ' ' << y;
        if (v < 0.0) lo = y; else hi = y;
        double next = y - v / (alpha - beta / y);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double step = std::fabs(next - y);
        y = next;
        if (step <= 1e-15 * y) {
            const double residual = std::expm1(-h(y));
            if (std::fabs(residual) <= 1e-10) return std::exp(y);
        }
    }
    throw ConvergenceError("log_example_A_n: no convergence; log A iterates:" + trace.str(), std::exp(y),
                           std::fabs(std::expm1(-h(y))));
}

}  // namespace stable_stein
