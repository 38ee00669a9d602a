#include "stable_stein/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "stable_stein/errors.hpp"
#include "stable_stein/numerics.hpp"

namespace stable_stein {

namespace {

template <class F>
void parallel_for(std::uint64_t count, unsigned threads, F&& body) {
    if (threads == 0) threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, count / 256)));
    if (threads <= 1) {
        body(std::uint64_t{0}, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned k = 0; k < threads; ++k) {
        const std::uint64_t lo = k * chunk;
        const std::uint64_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, &errors, k, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// x >= threshold with P(xi > x) = w (upper) or P(xi < -x) = w (lower), in log x.
double invert_tail(const DistributionSpec& spec, bool upper, double w) {
    const double A = spec.threshold();
    auto tail = [&](double x) { return upper ? spec.upper_tail(x) : spec.lower_tail(x); };
    if (tail(A) <= w) return A;
    const double y0 = std::log(A);
    const double lw = std::log(w);
    auto f = [&](double y) { return std::log(tail(std::exp(y))) - lw; };
    double step = 1.0;
    while (f(y0 + step) > 0.0) step *= 2.0;
    return std::exp(find_root(f, y0 + 0.5 * step * (step > 1.0), y0 + step, 1e-13));
}

double sample_by_tails(const DistributionSpec& spec, double u) {
    const double pL = spec.lower_tail(spec.threshold());
    if (u < pL) return -invert_tail(spec, false, u);
    return invert_tail(spec, true, 1.0 - u);
}

double sample_hall(const HallTransform& h, double u) {
    // |Z| has CDF G(z) = 2 a z + 2 b z^(c+1)/(c+1) on [0,1], and v <= G(v/(2a)), G(v) <= v.
    const double v = std::fabs(2.0 * u - 1.0);
    const double sign = u < 0.5 ? -1.0 : 1.0;
    if (v == 0.0) return sign * std::numeric_limits<double>::max();
    auto G = [&](double z) { return 2.0 * h.a * z + 2.0 * h.b * std::pow(z, h.c + 1.0) / (h.c + 1.0); };
    const double lv = std::log(v);
    auto f = [&](double y) { return std::log(G(std::exp(y))) - lv; };
    double lo = lv;
    double hi = std::min(0.0, lv - std::log(2.0 * h.a));
    double y;
    if (f(lo) >= 0.0) {
        y = lo;
    } else if (f(hi) <= 0.0) {
        y = hi;
    } else {
        y = find_root(f, lo, hi, 1e-14);
    }
    return sign * std::exp(-y / h.alpha);
}

}  // namespace

unsigned default_thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("STABLE_STEIN_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

double sample_summand(const DistributionSpec& spec, RngStream& rng) {
    const double u = rng.uniform();
    switch (spec.kind()) {
        case SpecKind::pareto: {
            const double a = std::get<Pareto>(spec.variant()).alpha;
            return u < 0.5 ? -std::pow(2.0 * u, -1.0 / a) : std::pow(2.0 * (1.0 - u), -1.0 / a);
        }
        case SpecKind::hall: return sample_hall(std::get<HallTransform>(spec.variant()), u);
        case SpecKind::modified_pareto:
        case SpecKind::general_tail:
        case SpecKind::log_pareto: return sample_by_tails(spec, u);
    }
    return 0.0;
}

double sample_stable(double alpha, RngStream& rng) {
    if (!(alpha > 0.0) || !(alpha < 2.0)) throw DomainError("sample_stable: alpha must lie in (0,2)");
    const double V = std::numbers::pi * (rng.uniform() - 0.5);
    const double W = rng.exponential();
    if (alpha == 1.0) return std::tan(V);
    return std::sin(alpha * V) / std::pow(std::cos(V), 1.0 / alpha) *
           std::pow(std::cos((1.0 - alpha) * V) / W, (1.0 - alpha) / alpha);
}

std::vector<SampleBatch> sample_sums_nested(const DistributionSpec& spec, std::span<const std::uint64_t> n_grid,
                                            std::uint64_t m, std::uint64_t seed, unsigned threads) {
    if (n_grid.empty()) throw UsageError("sample_sums: empty n grid");
    if (m < 1) throw DomainError("sample_sum: m must be at least 1");
    for (std::size_t k = 0; k < n_grid.size(); ++k) {
        if (n_grid[k] < 1) throw DomainError("sample_sum: n must be at least 1");
        if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw UsageError("sample_sums: n grid must increase");
    }
    const double alpha = spec.alpha();
    const double mean = spec.mean();
    std::vector<double> inv_scale;
    std::vector<SampleBatch> out;
    for (auto n : n_grid) {
        inv_scale.push_back(std::pow(spec.ell(static_cast<double>(n)), -1.0 / alpha));
        out.push_back(SampleBatch{spec, n, m, seed, std::vector<double>(m)});
    }
    const std::uint64_t n_max = n_grid.back();
    parallel_for(m, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t r = lo; r < hi; ++r) {
            RngStream rng(seed, make_stream_id(StreamTag::summands, r));
            CompensatedSum s;
            std::size_t k = 0;
            for (std::uint64_t i = 1; i <= n_max; ++i) {
                s += sample_summand(spec, rng) - mean;
                if (i == n_grid[k]) {
                    const double v = s.value() * inv_scale[k];
                    if (!std::isfinite(v)) {
                        throw DomainError("sample_sum: non-finite sum at replicate " + std::to_string(r) +
                                          ", n = " + std::to_string(i));
                    }
                    out[k].values[r] = v;
                    ++k;
                }
            }
        }
    });
    for (auto& b : out) std::sort(b.values.begin(), b.values.end());
    return out;
}

SampleBatch sample_sum(const DistributionSpec& spec, std::uint64_t n, std::uint64_t m, std::uint64_t seed,
                       unsigned threads) {
    const std::uint64_t grid[1] = {n};
    return std::move(sample_sums_nested(spec, grid, m, seed, threads).front());
}

std::vector<double> sample_stable_sorted(double alpha, std::uint64_t m, std::uint64_t seed, StreamTag tag,
                                         std::uint64_t index_base, unsigned threads) {
    std::vector<double> v(m);
    parallel_for(m, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t r = lo; r < hi; ++r) {
            RngStream rng(seed, make_stream_id(tag, index_base + r));
            v[r] = sample_stable(alpha, rng);
        }
    });
    std::sort(v.begin(), v.end());
    return v;
}

McEstimate k_function_monte_carlo(const DistributionSpec& spec, std::uint64_t n, double t, double N,
                                  std::uint64_t draws, std::uint64_t seed) {
    if (draws < 2) throw DomainError("k_function_monte_carlo: need at least two draws");
    if (n < 1) throw DomainError("k_function_monte_carlo: n must be at least 1");
    const double inv = std::pow(spec.ell(static_cast<double>(n)), -1.0 / spec.alpha());
    const double mean = spec.mean();
    RngStream rng(seed, make_stream_id(StreamTag::kernel, 0));
    double avg = 0.0;
    double m2 = 0.0;
    for (std::uint64_t i = 1; i <= draws; ++i) {
        const double z = (sample_summand(spec, rng) - mean) * inv;
        double v = 0.0;
        if (t >= 0.0) {
            if (z >= t && z <= N) v = z;
        } else if (z >= -N && z <= t) {
            v = -z;
        }
        const double delta = v - avg;
        avg += delta / static_cast<double>(i);
        m2 += delta * (v - avg);
    }
    const double var = m2 / static_cast<double>(draws - 1);
    return {avg, std::sqrt(var / static_cast<double>(draws))};
}

}  // namespace stable_stein
