#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stable_stein/distribution.hpp"
#include "stable_stein/rng.hpp"

namespace stable_stein {

// Worker count: hardware concurrency capped by STABLE_STEIN_THREADS when set.
unsigned default_thread_count();

double sample_summand(const DistributionSpec& spec, RngStream& rng);
// Chambers-Mallows-Stuck, symmetric case, characteristic function exp(-|lambda|^alpha).
double sample_stable(double alpha, RngStream& rng);

struct SampleBatch {
    DistributionSpec spec;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;  // sorted realizations of S_n
};

// m realizations of S_n = ell_n^(-1/alpha) sum (xi_i - E xi). Replicate r reads the
// summand stream r of seed, so results do not depend on the thread count.
SampleBatch sample_sum(const DistributionSpec& spec, std::uint64_t n, std::uint64_t m, std::uint64_t seed,
                       unsigned threads = 0);

// sample_sum for every n of an increasing grid from one pass over the summand streams.
// Element k equals sample_sum(spec, n_grid[k], m, seed) exactly.
std::vector<SampleBatch> sample_sums_nested(const DistributionSpec& spec, std::span<const std::uint64_t> n_grid,
                                            std::uint64_t m, std::uint64_t seed, unsigned threads = 0);

// Sorted unit stable sample; draw r uses stream make_stream_id(tag, index_base + r).
std::vector<double> sample_stable_sorted(double alpha, std::uint64_t m, std::uint64_t seed, StreamTag tag,
                                         std::uint64_t index_base = 0, unsigned threads = 0);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte-Carlo K_1(t, N) = E[zeta 1{t <= zeta <= N}] for t >= 0 and E[-zeta 1{-N <= zeta <= t}] for t < 0.
McEstimate k_function_monte_carlo(const DistributionSpec& spec, std::uint64_t n, double t, double N,
                                  std::uint64_t draws, std::uint64_t seed);

}  // namespace stable_stein
