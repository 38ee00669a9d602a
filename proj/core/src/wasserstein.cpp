#include "stable_stein/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stable_stein/errors.hpp"
#include "stable_stein/numerics.hpp"
#include "stable_stein/stable_table.hpp"

namespace stable_stein {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A point u of (0,1) carried as w = min(u, 1-u) and q = Q(1-w) >= 0, so that tail
// probabilities keep full relative precision.
struct QPoint {
    bool upper;  // u >= 1/2
    double w;
    double q;
    double u() const { return upper ? 1.0 - w : w; }
    // Phi(u) = int_0^u Q = -(q w + E(X - q)^+), by symmetry of the law.
    double phi(const StableTable& tab) const { return -(q * w + tab.upper_partial_expectation(q)); }
    double signed_q() const { return upper ? q : -q; }
};

QPoint boundary(const StableTable& tab, std::uint64_t j, std::uint64_t m) {
    const bool upper = 2 * j >= m;
    const double w = static_cast<double>(upper ? m - j : j) / static_cast<double>(m);
    if (w == 0.0) return {upper, 0.0, std::numeric_limits<double>::infinity()};
    return {upper, w, tab.survival_quantile(w)};
}

void check_sorted_size(std::span<const double> v) {
    if (v.size() < 100) throw DomainError("empirical W1: m < 100 is refused");
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) return kNaN;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string to_string(W1Estimator e) {
    switch (e) {
        case W1Estimator::one_sample_quantile: return "one_sample_quantile";
        case W1Estimator::two_sample: return "two_sample";
        case W1Estimator::bias_corrected: return "bias_corrected";
    }
    return "unknown";
}

W1Estimator w1_estimator_from_string(const std::string& s) {
    if (s == "one_sample_quantile" || s == "one-sample") return W1Estimator::one_sample_quantile;
    if (s == "two_sample" || s == "two-sample") return W1Estimator::two_sample;
    if (s == "bias_corrected" || s == "bias-corrected") return W1Estimator::bias_corrected;
    throw UsageError("unknown W1 estimator: " + s);
}

double w1_one_sample(std::span<const double> sorted, const StableLaw& law) {
    law.validate();
    const std::uint64_t m = sorted.size();
    if (m == 0) throw DomainError("w1_one_sample: empty sample");
    const auto tab = StableTable::shared(law.alpha);
    const double sigma = std::pow(law.scale, 1.0 / law.alpha);
    const double h = 1.0 / static_cast<double>(m);
    CompensatedSum total;
    QPoint a = boundary(*tab, 0, m);
    double phi_a = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) {
        const QPoint b = boundary(*tab, i + 1, m);
        const double phi_b = i + 1 == m ? 0.0 : b.phi(*tab);
        const double x = sorted[i] / sigma;
        const double qa = i == 0 ? -std::numeric_limits<double>::infinity() : a.signed_q();
        const double qb = i + 1 == m ? std::numeric_limits<double>::infinity() : b.signed_q();
        double cell;
        if (x <= qa) {
            cell = (phi_b - phi_a) - x * h;
        } else if (x >= qb) {
            cell = x * h - (phi_b - phi_a);
        } else {
            const double ax = std::fabs(x);
            const double ws = ax > 0.0 ? tab->survival(ax) : 0.5;
            const QPoint s{x >= 0.0, ws, ax};
            // Lengths of [u_a, u*] and [u*, u_b].
            double right;
            if (s.upper) {
                right = b.upper ? s.w - b.w : b.u() - (1.0 - s.w);
            } else {
                right = b.upper ? (1.0 - b.w) - s.w : b.w - s.w;
            }
            right = std::clamp(right, 0.0, h);
            const double left = h - right;
            const double phi_s = s.phi(*tab);
            cell = x * left - (phi_s - phi_a) + (phi_b - phi_s) - x * right;
        }
        total += std::max(cell, 0.0);
        a = b;
        phi_a = phi_b;
    }
    return sigma * total.value();
}

double w1_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw DomainError("w1_two_sample: samples must have equal size");
    CompensatedSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s.value() / static_cast<double>(a.size());
}

FloorEstimate two_sample_floor(double alpha, std::uint64_t m, unsigned pairs, std::uint64_t seed,
                               unsigned threads) {
    FloorEstimate f;
    f.pairs = pairs;
    if (pairs == 0) return f;
    std::vector<double> vals;
    for (unsigned k = 0; k < pairs; ++k) {
        const auto x = sample_stable_sorted(alpha, m, seed, StreamTag::floor, 2ULL * k * m, threads);
        const auto y = sample_stable_sorted(alpha, m, seed, StreamTag::floor, (2ULL * k + 1) * m, threads);
        vals.push_back(w1_two_sample(x, y));
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    f.mean = mean / pairs;
    f.sd = sample_sd(vals);
    return f;
}

EmpiricalW1Result empirical_w1(const SampleBatch& batch, const StableLaw& target, W1Estimator estimator,
                               const W1Options& opts) {
    target.validate();
    check_sorted_size(batch.values);
    if (!std::is_sorted(batch.values.begin(), batch.values.end())) {
        throw DomainError("empirical_w1: batch values must be sorted");
    }
    const std::uint64_t m = batch.values.size();
    const double sigma = std::pow(target.scale, 1.0 / target.alpha);
    EmpiricalW1Result r;
    r.estimator = estimator;
    r.m = m;
    if (estimator == W1Estimator::one_sample_quantile) {
        r.estimate = w1_one_sample(batch.values, target);
        // Spread of the per-cell contributions; a rough error bar.
        const auto tab = StableTable::shared(target.alpha);
        std::vector<double> dev(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
            dev[i] = std::fabs(batch.values[i] - sigma * tab->quantile(u));
        }
        r.std_error = sample_sd(dev) / std::sqrt(static_cast<double>(m));
        return r;
    }
    auto ref = sample_stable_sorted(target.alpha, m, opts.seed, StreamTag::reference, 0, opts.threads);
    for (double& v : ref) v *= sigma;
    r.reference_m = m;
    const double T = w1_two_sample(batch.values, ref);
    const FloorEstimate floor = two_sample_floor(target.alpha, m, opts.floor_pairs, opts.seed, opts.threads);
    const double floor_mean = sigma * floor.mean;
    const double floor_sd = sigma * floor.sd;
    r.bias_floor_estimate = floor_mean;
    if (estimator == W1Estimator::two_sample) {
        r.estimate = T;
        r.std_error = floor.pairs >= 2 ? floor_sd : kNaN;
        return r;
    }
    r.estimate = std::max(0.0, T - floor_mean);
    r.std_error = floor.pairs >= 2 ? floor_sd * std::sqrt(1.0 + 1.0 / floor.pairs) : kNaN;
    return r;
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("fit_loglog: size mismatch");
    LogLogFit f;
    f.dropped.resize(x.size());
    f.residuals.assign(x.size(), kNaN);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        f.dropped[i] = !(y[i] > 0.0) || !(x[i] > 0.0) || !std::isfinite(y[i]);
        if (f.dropped[i]) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++k;
    }
    if (k < 2) throw DomainError("fit_loglog: fewer than two positive points");
    const double mx = sx / k, my = sy / k;
    const double vxx = sxx / k - mx * mx;
    if (!(vxx > 0.0)) throw DomainError("fit_loglog: x values must differ");
    f.slope = (sxy / k - mx * my) / vxx;
    f.intercept = my - f.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!f.dropped[i]) f.residuals[i] = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
    }
    return f;
}

RateFit fit_rate(const DistributionSpec& spec, std::span<const std::uint64_t> n_grid, std::uint64_t m,
                 std::uint64_t seed, const W1Options& opts) {
    if (n_grid.size() < 4) throw UsageError("fit_rate: need at least four n values");
    RateFit out;
    out.n_grid.assign(n_grid.begin(), n_grid.end());
    const auto batches = sample_sums_nested(spec, n_grid, m, seed, opts.threads);
    const StableLaw target(spec.alpha(), 1.0);
    std::vector<double> xs, ys;
    for (const auto& b : batches) {
        out.per_n.push_back(empirical_w1(b, target, W1Estimator::bias_corrected, opts));
        xs.push_back(static_cast<double>(b.n));
        ys.push_back(out.per_n.back().estimate);
    }
    out.fit = fit_loglog(xs, ys);
    return out;
}

}  // namespace stable_stein
