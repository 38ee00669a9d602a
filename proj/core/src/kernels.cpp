#include "stable_stein/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "stable_stein/errors.hpp"
#include "stable_stein/format.hpp"
#include "stable_stein/numerics.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/sampling.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha_kernel(double alpha) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw DomainError("kernels: alpha must lie in (1,2)");
}

void check_N(double N) {
    if (!(N > 0.0)) throw DomainError("kernels: N must be positive");
}

double pow_N(double N, double e) { return std::isinf(N) ? 0.0 : std::pow(N, e); }

// One side of the kernel for a centered variable. For the positive side the tail is
// P(xi > x) and the shift is E xi; for the negative side the tail is P(xi < -x) and the
// shift is -E xi.
struct Side {
    const DistributionSpec* spec;
    bool upper;
    double n;
    double N;
    double alpha;
    double ell_a;      // ell^(1/alpha)
    double ell_inv_a;  // ell^(-1/alpha)
    double shift;      // E xi or -E xi
    double a;          // d_alpha/(alpha - 1)

    double tail(double x) const { return upper ? spec->upper_tail(x) : spec->lower_tail(x); }
    double tail_integral(double lo, double hi) const {
        return upper ? spec->upper_tail_integral(lo, hi) : spec->lower_tail_integral(lo, hi);
    }

    // n K_1 at |t| = s by the tail identity.
    double nK1(double s) const {
        if (s >= N) return 0.0;
        const double bs = ell_a * s + shift;
        double v = n * s * tail(bs);
        if (!std::isinf(N)) {
            const double bN = ell_a * N + shift;
            v -= n * N * tail(bN);
            v += n * ell_inv_a * tail_integral(bs, bN);
        } else {
            v += n * ell_inv_a * tail_integral(bs, kInf);
        }
        return v;
    }

    double f(double s) const { return a * (std::pow(s, 1.0 - alpha) - pow_N(N, 1.0 - alpha)) - nK1(s); }

    double kernel_mass(double lo, double hi) const {
        return a * (std::pow(hi, 2.0 - alpha) - std::pow(lo, 2.0 - alpha)) / (2.0 - alpha);
    }

    // int_lo^hi |f| in log coordinates.
    double segment(double lo, double hi) const {
        auto g = [&](double u) {
            const double s = std::exp(u);
            return std::fabs(f(s)) * s;
        };
        const double abs_tol = 1e-13 * kernel_mass(lo, hi);
        auto r = quad::gauss_kronrod(g, std::log(lo), std::log(hi), abs_tol, 1e-12, 8000);
        if (!r.converged) {
            throw ConvergenceError("discrepancy_l1: quadrature did not converge", r.value, r.abs_error);
        }
        return r.value;
    }

    double integral() const {
        const double A = spec->threshold();
        const double L0 = std::min(1.0, std::isinf(N) ? 1.0 : N) * ell_inv_a;
        // Region near zero where n K_1 is constant (b_s inside the gap) or nearly so.
        double t0 = (A - shift) * ell_inv_a;
        const bool exact_gap = shift >= -A && t0 > 0.0;
        if (!exact_gap) t0 = 1e-9 * L0;
        t0 = std::min(t0, N);
        const double k0 = nK1(t0);
        const double NN = pow_N(N, 1.0 - alpha);
        auto G = [&](double t) { return a * (std::pow(t, 2.0 - alpha) / (2.0 - alpha) - NN * t) - k0 * t; };
        const double c = NN + k0 / a;
        double head;
        if (c <= 0.0) {
            head = G(t0);
        } else {
            const double tstar = std::pow(c, -1.0 / (alpha - 1.0));
            head = tstar >= t0 ? G(t0) : 2.0 * G(tstar) - G(t0);
        }
        if (t0 >= N) return head;

        std::vector<double> br{t0};
        for (double e : {(-A - shift) * ell_inv_a, (A - shift) * ell_inv_a}) {
            if (e > t0 && e < N) br.push_back(e);
        }
        std::sort(br.begin(), br.end());
        CompensatedSum total;
        total += head;
        for (std::size_t i = 0; i + 1 < br.size(); ++i) total += segment(br[i], br[i + 1]);
        if (!std::isinf(N)) {
            total += segment(br.back(), N);
            return total.value();
        }
        // N = inf: geometric blocks until the contribution is negligible or extrapolable.
        double T = std::max(br.back(), ell_inv_a);
        if (T > br.back()) total += segment(br.back(), T);
        // Stop when blocks are negligible, or extrapolate once the block ratio has settled
        // (power-law integrands give geometric blocks).
        double prev = -1.0;
        double prev_ratio = -1.0;
        int quiet = 0;
        int growing = 0;
        for (int k = 0; k < 200; ++k) {
            const double B = segment(T, 4.0 * T);
            total += B;
            quiet = B <= 1e-14 * total.value() ? quiet + 1 : 0;
            if (quiet >= 3) return total.value();
            if (prev > 0.0 && B > 1e-13 * total.value()) {
                const double ratio = B / prev;
                growing = ratio >= 1.0 ? growing + 1 : 0;
                if (growing >= 8) break;
                if (ratio < 0.95 && prev_ratio > 0.0 && std::fabs(ratio - prev_ratio) <= 1e-7 * ratio) {
                    total += B * ratio / (1.0 - ratio);
                    return total.value();
                }
                prev_ratio = ratio;
            }
            prev = B;
            T *= 4.0;
        }
        throw ConvergenceError("discrepancy_l1: integral over t does not converge as N -> inf", total.value(),
                               prev);
    }
};

Side make_side(const DistributionSpec& spec, double n, double N, bool upper) {
    const double alpha = spec.alpha();
    const double ell = spec.ell(n);
    const double m = spec.mean();
    return Side{&spec, upper, n, N, alpha, std::pow(ell, 1.0 / alpha), std::pow(ell, -1.0 / alpha),
                upper ? m : -m, d_alpha(alpha) / (alpha - 1.0)};
}

double k_closed_form(const ModifiedPareto& mp, double ell, double t, double N) {
    const double at = std::fabs(t);
    const double L = std::pow(ell, -1.0 / mp.alpha);
    const double u = std::max(at, L);
    if (u >= N) return 0.0;
    const double la = std::pow(ell, 1.0 / mp.alpha);
    double v = mp.A / (2.0 * (mp.alpha - 1.0)) *
               (std::pow(la * u, 1.0 - mp.alpha) - pow_N(la * N, 1.0 - mp.alpha));
    if (mp.B > 0.0) {
        v += mp.B / (2.0 * (mp.beta - 1.0)) * (std::pow(la * u, 1.0 - mp.beta) - pow_N(la * N, 1.0 - mp.beta));
    }
    return v / la;
}

// Exact (1/alpha) int |alpha K_alpha - n K_1| for ModifiedPareto, including the sign change
// of the integrand below ell^(-1/alpha).
double discrepancy_closed_form(const ModifiedPareto& mp, double n, double N) {
    const double alpha = mp.alpha;
    const double beta = mp.beta;
    const double d = d_alpha(alpha);
    const double ell = mp.A / (2.0 * d) * n;
    const double L = std::pow(ell, -1.0 / alpha);
    const double a = d / (alpha - 1.0);
    if (N <= L) return 2.0 / alpha * d * std::pow(N, 2.0 - alpha) / (2.0 - alpha);
    const double c = mp.B * d / (mp.A * (beta - 1.0)) * std::pow(ell, (alpha - beta) / alpha);
    double outer = 0.0;
    if (c > 0.0) {
        if (std::isinf(N)) {
            if (!(beta > 2.0)) throw DomainError("discrepancy_l1: N = inf requires beta > 2");
            outer = c * std::pow(L, 2.0 - beta) / (beta - 2.0);
        } else if (std::fabs(beta - 2.0) < 1e-12) {
            outer = c * (std::log(N / L) - (N - L) / N);
        } else {
            outer = c * ((std::pow(L, 2.0 - beta) - std::pow(N, 2.0 - beta)) / (beta - 2.0) -
                         std::pow(N, 1.0 - beta) * (N - L));
        }
    }
    const double k = c * (std::pow(L, 1.0 - beta) - pow_N(N, 1.0 - beta));
    const double LL = std::pow(L, 1.0 - alpha);
    auto G = [&](double t) { return a * (std::pow(t, 2.0 - alpha) / (2.0 - alpha) - LL * t) - k * t; };
    const double tstar = std::pow(LL + k / a, -1.0 / (alpha - 1.0));
    const double inner = 2.0 * G(tstar) - G(L);
    return 2.0 / alpha * (inner + outer);
}

}  // namespace

std::string to_string(KernelBackend b) {
    switch (b) {
        case KernelBackend::closed_form: return "closed_form";
        case KernelBackend::quadrature: return "quadrature";
        case KernelBackend::monte_carlo: return "monte_carlo";
    }
    return "unknown";
}

KernelBackend kernel_backend_from_string(const std::string& s) {
    if (s == "closed_form" || s == "closed-form") return KernelBackend::closed_form;
    if (s == "quadrature") return KernelBackend::quadrature;
    if (s == "monte_carlo" || s == "monte-carlo") return KernelBackend::monte_carlo;
    throw UsageError("unknown kernel backend: " + s);
}

double stable_kernel(double alpha, double t, double N) {
    check_alpha_kernel(alpha);
    check_N(N);
    const double at = std::fabs(t);
    if (at > N) throw DomainError("stable_kernel: |t| must not exceed N");
    if (at == 0.0) return kInf;
    if (at == N) return 0.0;
    return d_alpha(alpha) / (alpha * (alpha - 1.0)) * (std::pow(at, 1.0 - alpha) - pow_N(N, 1.0 - alpha));
}

double stable_kernel_integral(double alpha, double N) {
    check_alpha_kernel(alpha);
    check_N(N);
    if (std::isinf(N)) return kInf;
    return 2.0 * d_alpha(alpha) * std::pow(N, 2.0 - alpha) / (alpha * (2.0 - alpha));
}

double k_function(const DistributionSpec& spec, double n, double t, double N, KernelBackend backend) {
    check_alpha_kernel(spec.alpha());
    check_N(N);
    if (!(n > 0.0)) throw DomainError("k_function: n must be positive");
    if (std::fabs(t) >= N) return 0.0;
    if (backend == KernelBackend::monte_carlo) {
        return k_function_monte_carlo(spec, static_cast<std::uint64_t>(std::llround(n)), t, N, 1'000'000,
                                      0x5eedULL)
            .mean;
    }
    if (backend == KernelBackend::closed_form) {
        if (auto mp = spec.as_modified_pareto()) return k_closed_form(*mp, spec.ell(n), t, N);
    }
    if (t == 0.0) t = 0.0;  // K_1(0) uses the positive branch
    const Side side = make_side(spec, n, N, t >= 0.0);
    return side.nK1(std::fabs(t)) / n;
}

double discrepancy_l1(const DistributionSpec& spec, double n, double N, KernelBackend backend) {
    check_alpha_kernel(spec.alpha());
    check_N(N);
    if (!(n > 0.0)) throw DomainError("discrepancy_l1: n must be positive");
    if (backend == KernelBackend::monte_carlo) {
        throw UsageError("discrepancy_l1: the Monte-Carlo backend is a test oracle only");
    }
    if (backend == KernelBackend::closed_form) {
        if (auto mp = spec.as_modified_pareto()) return discrepancy_closed_form(*mp, n, N);
    }
    const double alpha = spec.alpha();
    const Side pos = make_side(spec, n, N, true);
    const double right = pos.integral();
    const double left = spec.symmetric() ? right : make_side(spec, n, N, false).integral();
    return (right + left) / alpha;
}

KernelPair::KernelPair(DistributionSpec spec, double n, double N, KernelBackend backend)
    : spec_(std::move(spec)), n_(n), N_(N), backend_(backend) {
    check_alpha_kernel(spec_.alpha());
    check_N(N_);
    if (!(n_ > 0.0)) throw DomainError("KernelPair: n must be positive");
}

double KernelPair::discrepancy() const {
    return discrepancy_l1(spec_, n_, N_, backend_ == KernelBackend::monte_carlo ? KernelBackend::quadrature
                                                                                : backend_);
}

void KernelPair::write_profile_csv(std::ostream& os, std::span<const double> t_grid) const {
    os << "t,stable_kernel,k_function,abs_diff\n";
    for (double t : t_grid) {
        if (std::fabs(t) > N_ || t == 0.0) continue;
        const double s = stable(t);
        const double k = this->k(t);
        os << fmt_double(t) << ',' << fmt_double(s) << ',' << fmt_double(k) << ','
           << fmt_double(std::fabs(s / n_ - k / alpha())) << '\n';
    }
}

}  // namespace stable_stein
