// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "oracle_values.hpp"
#include "stable_stein/bounds.hpp"
#include "stable_stein/distribution.hpp"
#include "stable_stein/kernels.hpp"
#include "stable_stein/numerics.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/sampling.hpp"
#include "stable_stein/special.hpp"
#include "stable_stein/stable_density.hpp"
#include "stable_stein/tables.hpp"
#include "stable_stein/wasserstein.hpp"

using namespace stable_stein;

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kTable1[9] = {22.14, 11.45, 8.04, 6.42, 5.51, 4.94, 4.57, 4.32, 4.15};

// rows gamma = 0.1..0.9, columns alpha = 1.1..1.9
constexpr double kTable2[9][9] = {
    {33.13, 19.01, 14.40, 12.17, 10.89, 10.09, 9.55, 9.18, 8.91},
    {35.17, 20.33, 15.50, 13.17, 11.83, 11.00, 10.45, 10.06, 9.79},
    {38.59, 22.43, 17.17, 14.64, 13.20, 12.30, 11.70, 11.30, 11.01},
    {43.94, 25.62, 19.66, 16.80, 15.17, 14.16, 13.49, 13.04, 12.71},
    {52.30, 30.53, 23.45, 20.05, 18.12, 16.92, 16.13, 15.59, 15.21},
    {65.91, 38.43, 29.49, 25.20, 22.76, 21.24, 20.24, 19.55, 19.07},
    {90.04, 52.33, 40.06, 34.16, 30.79, 28.69, 27.31, 26.36, 25.68},
    {140.69, 81.33, 62.00, 52.67, 47.34, 44.00, 41.78, 40.25, 39.16},
    {298.18, 171.06, 129.58, 109.52, 98.02, 90.78, 85.95, 82.58, 80.16},
};

constexpr double kTable3Printed[9][9] = {
    {9.906, 6.245, 5.121, 4.636, 4.424, 4.399, 4.588, 5.114, 6.174},
    {3.176, 2.213, 1.975, 1.925, 1.970, 2.112, 2.418, 3.030, 4.154},
    {1.066, 0.818, 0.792, 0.833, 0.921, 1.087, 1.407, 2.032, 3.177},
    {0.377, 0.317, 0.333, 0.380, 0.462, 0.617, 0.926, 1.544, 2.694},
    {0.142, 0.131, 0.149, 0.186, 0.255, 0.396, 0.692, 1.300, 2.451},
    {0.059, 0.058, 0.073, 0.101, 0.160, 0.289, 0.576, 1.177, 2.327},
    {0.027, 0.029, 0.040, 0.063, 0.115, 0.238, 0.518, 1.114, 2.263},
    {0.016, 0.018, 0.026, 0.046, 0.095, 0.214, 0.490, 1.084, 2.232},
    {0.014, 0.015, 0.023, 0.042, 0.091, 0.210, 0.487, 1.081, 2.230},
};

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail, double seconds) {
    if (!pass) ++failures;
    std::printf("criterion %2d [%s] %s: %s (%.2f s)\n", id, pass ? "PASS" : "FAIL", title.c_str(), detail.c_str(),
                seconds);
    std::fflush(stdout);
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void criterion1() {
    const auto t0 = Clock::now();
    const auto t = table1(default_alpha_grid());
    double worst = 0.0;
    for (int i = 0; i < 9; ++i) worst = std::max(worst, std::fabs(t.at(0, i) - kTable1[i]));
    const double s = since(t0);
    report(1, worst <= 0.01 && s < 1.0, "Table 1 reproduction", fmt("max |D_alpha - printed| = %.4f (tol 0.01)", worst),
           s);
}

void criterion2() {
    const auto t0 = Clock::now();
    const auto t = table2(default_alpha_grid(), default_gamma_grid());
    double worst = 0.0;
    for (int g = 0; g < 9; ++g) {
        for (int a = 0; a < 9; ++a) worst = std::max(worst, std::fabs(t.at(g, a) - kTable2[g][a]));
    }
    const double s = since(t0);
    report(2, worst <= 0.02 && s < 1.0, "Table 2 reproduction",
           fmt("max |D_alpha,gamma - printed| = %.4f over 81 cells (tol 0.02)", worst), s);
}

void criterion3() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double a : {1.1, 1.5, 1.9}) {
        worst = std::max(worst, std::fabs(d_alpha_by_quadrature(a) / d_alpha(a) - 1.0));
    }
    const double lim = std::fabs(d_alpha(1.999) / 0.001 - 1.0);
    const double s = since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "closed vs quadrature max rel %.2e (tol 1e-8); |d_1.999/0.001 - 1| = %.4f (tol 0.02)",
                  worst, lim);
    report(3, worst <= 1e-8 && lim <= 0.02, "d_alpha consistency", buf, s);
}

void criterion4() {
    const auto t0 = Clock::now();
    const auto alphas = default_alpha_grid();
    const auto gammas = default_gamma_grid();
    const auto t = table3(1e6, alphas, gammas);
    const auto te = table3(1e6, alphas, gammas, Precision::extended);
    double worst = 0.0, worst_ext = 0.0;
    for (int g = 0; g < 9; ++g) {
        for (int a = 0; a < 9; ++a) {
            worst = std::max(worst, std::fabs(t.at(g, a) / oracle::kTable3[g][a + 1] - 1.0));
            worst_ext = std::max(worst_ext, std::fabs(t.at(g, a) / te.at(g, a) - 1.0));
        }
    }
    double printed = 0.0;
    for (int k = 0; k < 3; ++k) printed = std::max(printed, std::fabs(t.at(k, k) - kTable3Printed[k][k]));
    const double s = since(t0);
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "vs 30-digit oracle max rel %.2e, vs long double path %.2e (tol 1e-6); "
                  "printed cells (1.1,0.1),(1.2,0.2),(1.3,0.3) max |delta| %.4f (tol 0.005)",
                  worst, worst_ext, printed);
    report(4, worst <= 1e-6 && worst_ext <= 1e-6 && printed <= 0.005 && s < 5.0, "Table 3", buf, s);
    std::printf("    Table 3 delta report (regenerated - printed), remaining cells:\n");
    for (int g = 0; g < 9; ++g) {
        for (int a = 0; a < 9; ++a) {
            if (g == a && g < 3) continue;
            std::printf("      alpha=%.1f gamma=%.1f regenerated=%.4f printed=%.3f delta=%+.4f\n", alphas[a], gammas[g],
                        t.at(g, a), kTable3Printed[g][a], t.at(g, a) - kTable3Printed[g][a]);
        }
    }
}

void criterion5() {
    const auto t0 = Clock::now();
    std::vector<double> grid(200);
    for (int i = 0; i < 200; ++i) grid[i] = -100.0 + 200.0 * i / 199.0;
    double worst = INFINITY;
    for (double a : {1.1, 1.3, 1.5, 1.7, 1.9}) worst = std::min(worst, verify_hk_bounds(a, grid).min_margin());
    const double s = since(t0);
    report(5, worst >= -1e-6 && s < 30.0, "Heat-kernel bounds", fmt("min slack %.3e over 5 alphas x 200 points (tol -1e-6)", worst),
           s);
}

void criterion6() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double a : {1.1, 1.5, 1.9}) {
        const StableLaw law(a);
        const double core = quad::integrate([&](double x) { return density(law, x); }, 0.0, 40.0, 1e-13, 1e-13);
        const double tail = quad::integrate(
            [&](double u) {
                const double x = 40.0 * std::exp(u);
                return density(law, x) * x;
            },
            0.0, 80.0, 1e-14, 1e-13);
        worst = std::max(worst, std::fabs(2.0 * (core + tail) - 1.0));
    }
    const double cauchy = std::fabs(density(StableLaw(1.0), 0.0) - 1.0 / M_PI);
    const double s = since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "max |int p - 1| = %.2e (tol 1e-6); |p(1,0) - 1/pi| at alpha=1 = %.2e (tol 1e-8)",
                  worst, cauchy);
    report(6, worst <= 1e-6 && cauchy <= 1e-8, "Density sanity", buf, s);
}

void criterion7() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double a : {1.2, 1.5, 1.8}) {
        const auto x = sample_stable_sorted(a, 1000000, 7, StreamTag::user);
        for (double lam : {0.5, 1.0, 2.0}) {
            CompensatedSum c;
            for (double v : x) c.add(std::cos(lam * v));
            worst = std::max(worst, std::fabs(c.value() / x.size() - std::exp(-std::pow(lam, a))));
        }
    }
    const double s = since(t0);
    report(7, worst <= 0.004 && s < 30.0, "Sampler characteristic function",
           fmt("max |E cos(lambda X) - exp(-lambda^alpha)| = %.5f (tol 0.004)", worst), s);
}

void criterion8() {
    const auto t0 = Clock::now();
    const auto p = DistributionSpec::pareto(1.5);
    double worst_z = 0.0;
    for (double t : {0.05, 0.1, 0.5}) {
        const auto mc = k_function_monte_carlo(p, 1000, t, 10.0, 1000000, 0x5eed);
        worst_z = std::max(worst_z, std::fabs(mc.mean - k_function(p, 1000, t, 10.0)) / mc.std_error);
    }
    double worst_rel = 0.0;
    for (double a : {1.2, 1.5, 1.8}) {
        const auto s = DistributionSpec::pareto(a);
        for (double N : {10.0, double(INFINITY)}) {
            const double c = discrepancy_l1(s, 1000, N);
            const double q = discrepancy_l1(s, 1000, N, KernelBackend::quadrature);
            worst_rel = std::max(worst_rel, std::fabs(q / c - 1.0));
        }
    }
    const double s = since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "K_1 max |closed - MC|/SE = %.2f (tol 3); discrepancy closed vs quadrature max rel %.2e (tol 1e-6)",
                  worst_z, worst_rel);
    report(8, worst_z <= 3.0 && worst_rel <= 1e-6, "Kernel oracle", buf, s);
}

void criteria9and10() {
    const auto t0 = Clock::now();
    const double alpha = 1.5;
    const auto spec = DistributionSpec::pareto(alpha);
    const std::vector<std::uint64_t> grid{100, 316, 1000, 3162, 10000};
    W1Options opts;
    opts.seed = 1;
    const auto fit = fit_rate(spec, grid, 100000, 1, opts);
    const double s9 = since(t0);

    bool dominated = true;
    std::printf("    simulation: Pareto alpha=1.5, m=100000, seed=1\n");
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double bound = optimize_gamma(spec, alpha, static_cast<double>(grid[k]), INFINITY).total_star;
        const auto& r = fit.per_n[k];
        dominated = dominated && r.estimate <= bound;
        std::printf("      n=%-6llu w1=%.5f se=%.5f floor=%.5f bound=%.4f\n", static_cast<unsigned long long>(grid[k]),
                    r.estimate, r.std_error, r.bias_floor_estimate, bound);
    }
    bool monotone = true;
    const std::size_t idx[3] = {0, 2, 4};  // n = 1e2, 1e3, 1e4
    for (int k = 0; k + 1 < 3; ++k) {
        const auto& a = fit.per_n[idx[k]];
        const auto& b = fit.per_n[idx[k + 1]];
        if (b.estimate > a.estimate + 2.0 * std::max(a.std_error, b.std_error)) monotone = false;
    }
    std::string detail = std::string("domination ") + (dominated ? "holds" : "violated") +
                         "; non-increasing over n in {1e2,1e3,1e4} up to 2 SE " + (monotone ? "holds" : "violated");
    report(9, dominated && monotone && s9 < 300.0, "Bound domination", detail, s9);

    const auto t1 = Clock::now();
    double worst_slope = 0.0;
    for (double a : {1.2, 1.5, 1.8}) {
        const auto ps = DistributionSpec::pareto(a);
        std::vector<double> ns, totals;
        for (double n = 1e4; n <= 1e8; n *= 10) {
            ns.push_back(n);
            totals.push_back(optimize_gamma(ps, a, n, INFINITY).total_star);
        }
        worst_slope = std::max(worst_slope, std::fabs(fit_loglog(ns, totals).slope + (2 - a) / a));
    }
    const bool bound_ok = worst_slope <= 0.02;
    std::size_t used = 0;
    for (bool d : fit.fit.dropped) used += !d;
    const bool fitted = used >= 2;
    const double slope = fitted ? fit.fit.slope : NAN;
    const bool empirical_ok = fitted && slope >= -0.53 && slope <= -0.13;
    char buf[240];
    if (fitted) {
        std::snprintf(buf, sizeof buf,
                      "bound-total slope max |error| %.4f (tol 0.02); empirical slope %.3f from %zu positive points "
                      "(band [-0.53, -0.13])",
                      worst_slope, slope, used);
    } else {
        std::snprintf(buf, sizeof buf,
                      "bound-total slope max |error| %.4f (tol 0.02); empirical slope undefined: only %zu of %zu "
                      "bias-corrected estimates are positive",
                      worst_slope, used, grid.size());
    }
    report(10, bound_ok && empirical_ok, "Rate check", buf, since(t1) + s9);
}

void criterion11() {
    const auto t0 = Clock::now();
    const double alpha = 1.5;
    const auto s = DistributionSpec::pareto(alpha);
    double worst = 0.0, worst_z = 0.0;
    int k = 0;
    for (double t : {0.5, 2.0, 5.0}) {
        const double lhs = alpha / (2 * (alpha - 1)) * std::pow(std::max(t, 1.0), 1 - alpha);
        const double rhs = t * s.upper_tail(t) + s.upper_tail_integral(t, INFINITY);
        worst = std::max(worst, std::fabs(lhs - rhs) / lhs);
        // Importance sampling from kappa y^(-kappa-1) on y > 1; the weighted
        // estimator has finite variance for kappa < 2 alpha - 2, plain sampling does not.
        const double kappa = 0.25;
        RngStream rng(11, make_stream_id(StreamTag::user, k++));
        double mean = 0.0, m2 = 0.0;
        const int draws = 1000000;
        for (int i = 0; i < draws; ++i) {
            const double y = std::pow(rng.uniform(), -1.0 / kappa);
            const double w = alpha / (2 * kappa) * std::pow(y, kappa - alpha);
            const double v = y > t ? y * w : 0.0;
            const double d = v - mean;
            mean += d / (i + 1);
            m2 += d * (v - mean);
        }
        const double se = std::sqrt(m2 / (draws - 1) / draws);
        worst_z = std::max(worst_z, std::fabs(mean - lhs) / se);
    }
    const double sec = since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "analytic max rel %.2e (tol 1e-12); importance-sampled Monte-Carlo max |diff|/SE = %.2f (tol 3)", worst,
                  worst_z);
    report(11, worst <= 1e-12 && worst_z <= 3.0, "Tail identity", buf, sec);
}

void criterion12() {
    const auto t0 = Clock::now();
    const double alpha = 1.5, x0 = std::exp(1.0);
    double worst_res = 0.0, worst_closed = 0.0;
    for (double beta : {0.0, 1.0}) {
        const double K0 = std::pow(x0, alpha) / std::pow(std::log(x0), beta);
        for (double n : {1e4, 1e6, 1e8}) {
            const double A = log_example_A_n(K0, x0, alpha, beta, n);
            worst_res = std::max(worst_res, std::fabs(n * K0 * std::pow(std::log(A), beta) / std::pow(A, alpha) - 1.0));
            if (beta == 0.0) worst_closed = std::max(worst_closed, std::fabs(A / std::pow(K0 * n, 1 / alpha) - 1.0));
        }
    }
    const auto ro = rate_order(DistributionSpec::log_pareto(alpha, 1.0, std::exp(alpha), x0), alpha);
    const bool rate_ok = ro.classified && ro.log_scale && std::fabs(ro.exponent + (1 - 1 / alpha)) <= 1e-15;
    const double s = since(t0);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "A_n max residual %.2e (tol 1e-10); beta=0 vs (K0 n)^(1/alpha) max rel %.2e; rate exponent %.6f on log n",
                  worst_res, worst_closed, ro.exponent);
    report(12, worst_res <= 1e-10 && worst_closed <= 1e-14 && rate_ok, "Log-perturbed example", buf, s);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criteria9and10();
    criterion11();
    criterion12();
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
