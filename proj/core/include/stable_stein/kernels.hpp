#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include "stable_stein/distribution.hpp"

namespace stable_stein {

enum class KernelBackend { closed_form, quadrature, monte_carlo };

std::string to_string(KernelBackend b);
KernelBackend kernel_backend_from_string(const std::string& s);

// d_alpha/(alpha(alpha-1)) (|t|^(1-alpha) - N^(1-alpha)) for 0 < |t| <= N; N may be +inf.
// t = 0 returns +inf (integrable singularity); |t| > N is a domain error.
double stable_kernel(double alpha, double t, double N);
// Integral of the stable kernel over [-N, N].
double stable_kernel_integral(double alpha, double N);

// K_1(t, N) for zeta = ell_n^(-1/alpha)(xi - E xi). Zero for |t| >= N.
// closed_form covers Pareto, ModifiedPareto and Hall; other specs fall back to quadrature.
// monte_carlo draws 10^6 summands with a fixed seed and exists as a test oracle.
double k_function(const DistributionSpec& spec, double n, double t, double N,
                  KernelBackend backend = KernelBackend::closed_form);

// Sum_i int |K_alpha(t,N)/n - K_i(t,N)/alpha| dt = (1/alpha) int |alpha K_alpha - n K_1| dt.
// N may be +inf when the integral converges.
double discrepancy_l1(const DistributionSpec& spec, double n, double N,
                      KernelBackend backend = KernelBackend::closed_form);

// Evaluable pair (stable kernel, K_1) for one spec and (n, N).
class KernelPair {
public:
    KernelPair(DistributionSpec spec, double n, double N, KernelBackend backend = KernelBackend::closed_form);

    double alpha() const { return spec_.alpha(); }
    double n() const { return n_; }
    double N() const { return N_; }
    KernelBackend backend() const { return backend_; }
    const DistributionSpec& spec() const { return spec_; }

    double stable(double t) const { return stable_kernel(spec_.alpha(), t, N_); }
    double k(double t) const { return k_function(spec_, n_, t, N_, backend_); }
    double discrepancy() const;

    // CSV with header t,stable_kernel,k_function,abs_diff where abs_diff = |K_alpha/n - K_1/alpha|.
    void write_profile_csv(std::ostream& os, std::span<const double> t_grid) const;

private:
    DistributionSpec spec_;
    double n_;
    double N_;
    KernelBackend backend_;
};

}  // namespace stable_stein
