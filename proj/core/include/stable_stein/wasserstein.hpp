#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stable_stein/sampling.hpp"
#include "stable_stein/stable_density.hpp"

namespace stable_stein {

enum class W1Estimator { one_sample_quantile, two_sample, bias_corrected };

std::string to_string(W1Estimator e);
W1Estimator w1_estimator_from_string(const std::string& s);

struct EmpiricalW1Result {
    double estimate = 0.0;
    double std_error = 0.0;
    W1Estimator estimator = W1Estimator::bias_corrected;
    std::uint64_t m = 0;
    std::uint64_t reference_m = 0;
    double bias_floor_estimate = 0.0;
};

struct W1Options {
    // Seed of the reference and floor samples. Reusing it across batches gives common
    // reference draws.
    std::uint64_t seed = 0;
    unsigned floor_pairs = 8;
    unsigned threads = 0;
};

// Exact W1 between the empirical law of a sorted sample and the stable law:
// sum_i int_{(i-1)/m}^{i/m} |x_(i) - Q(u)| du, with the integral of Q in closed form.
double w1_one_sample(std::span<const double> sorted, const StableLaw& law);
// Mean |a_(i) - b_(i)| for sorted samples of equal size.
double w1_two_sample(std::span<const double> a, std::span<const double> b);

struct FloorEstimate {
    double mean = 0.0;
    double sd = 0.0;
    unsigned pairs = 0;
};

// Two-sample statistic between independent stable samples of size m, over `pairs` pairs.
FloorEstimate two_sample_floor(double alpha, std::uint64_t m, unsigned pairs, std::uint64_t seed,
                               unsigned threads = 0);

EmpiricalW1Result empirical_w1(const SampleBatch& batch, const StableLaw& target, W1Estimator estimator,
                               const W1Options& opts = {});

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;  // one per input point, NaN when dropped
    std::vector<bool> dropped;      // non-positive values are excluded from the fit
};

// Ordinary least squares of log y on log x.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

struct RateFit {
    LogLogFit fit;
    std::vector<std::uint64_t> n_grid;
    std::vector<EmpiricalW1Result> per_n;
};

// Bias-corrected W1 for every n (common random numbers across n), then a log-log fit.
RateFit fit_rate(const DistributionSpec& spec, std::span<const std::uint64_t> n_grid, std::uint64_t m,
                 std::uint64_t seed, const W1Options& opts = {});

}  // namespace stable_stein
