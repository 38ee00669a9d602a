#include "stable_stein/stable_table.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>

#include "stable_stein/errors.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

struct Hermite {
    double f0, f1, d0, d1, h;
    double value(double t) const {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
               (t3 - t2) * h * d1;
    }
    double slope(double t) const {
        const double t2 = t * t;
        return ((6 * t2 - 6 * t) * f0 + (-6 * t2 + 6 * t) * f1) / h + (3 * t2 - 4 * t + 1) * d0 +
               (3 * t2 - 2 * t) * d1;
    }
};

}  // namespace

StableTable::StableTable(double alpha, double step) : alpha_(alpha), h_(step) {
    if (!(alpha > 1.0) || !(alpha < 2.0)) throw DomainError("StableTable: alpha must lie in (1,2)");
    if (!(step > 0.0) || step > 1.0) throw UsageError("StableTable: step must lie in (0,1]");
    const auto n = static_cast<std::size_t>(std::ceil(kTailSwitch / step));
    h_ = kTailSwitch / static_cast<double>(n);
    c_alpha_ = stable_tail_constant(alpha);
    const StableLaw law(alpha);
    s_.resize(n + 1);
    p_.resize(n + 1);
    m_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double x = h_ * static_cast<double>(i);
        s_[i] = stable_stein::survival(law, x);
        p_[i] = density(law, x);
    }
    s_[n] = survival_tail_series(alpha, kTailSwitch);
    p_[n] = density_tail_series(alpha, kTailSwitch);
    s_edge_ = s_[n];
    // Partial mean: exact integral of the Hermite interpolant of the survival function.
    m_[n] = partial_expectation_tail_series(alpha, kTailSwitch);
    for (std::size_t i = n; i-- > 0;) {
        m_[i] = m_[i + 1] + 0.5 * h_ * (s_[i] + s_[i + 1]) - h_ * h_ * (p_[i] - p_[i + 1]) / 12.0;
    }
}

std::shared_ptr<const StableTable> StableTable::shared(double alpha) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const StableTable>> cache;
    const auto key = std::bit_cast<std::uint64_t>(alpha);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const StableTable>(alpha);
    cache.emplace(key, t);
    return t;
}

double StableTable::survival_pos(double x) const {
    if (x >= kTailSwitch) return survival_tail_series(alpha_, x);
    const double r = x / h_;
    auto i = static_cast<std::size_t>(r);
    if (i + 1 >= s_.size()) i = s_.size() - 2;
    const Hermite c{s_[i], s_[i + 1], -p_[i], -p_[i + 1], h_};
    return c.value(r - static_cast<double>(i));
}

double StableTable::partial_pos(double x) const {
    if (x >= kTailSwitch) return partial_expectation_tail_series(alpha_, x);
    const double r = x / h_;
    auto i = static_cast<std::size_t>(r);
    if (i + 1 >= m_.size()) i = m_.size() - 2;
    const Hermite c{m_[i], m_[i + 1], -s_[i], -s_[i + 1], h_};
    return c.value(r - static_cast<double>(i));
}

double StableTable::survival(double x) const {
    if (x >= 0.0) return survival_pos(x);
    return 1.0 - survival_pos(-x);
}

double StableTable::cdf(double x) const {
    if (x >= 0.0) return 1.0 - survival_pos(x);
    return survival_pos(-x);
}

double StableTable::upper_partial_expectation(double y) const {
    if (y >= 0.0) return partial_pos(y);
    return -y + partial_pos(-y);
}

double StableTable::survival_quantile(double v) const {
    if (v < s_edge_) {
        // Newton on the tail series from the Pareto-type guess.
        double x = std::max(kTailSwitch, std::pow(c_alpha_ / v, 1.0 / alpha_));
        for (int it = 0; it < 100; ++it) {
            const double f = survival_tail_series(alpha_, x) - v;
            const double p = density_tail_series(alpha_, x);
            double next = x + f / p;
            if (!(next >= kTailSwitch)) next = 0.5 * (x + kTailSwitch);
            if (std::fabs(next - x) <= 1e-14 * x) return next;
            x = next;
        }
        throw ConvergenceError("StableTable::quantile: tail Newton did not settle", x, 0.0);
    }
    // s_ is decreasing: find i with s_[i] >= v > s_[i+1].
    auto it = std::lower_bound(s_.begin(), s_.end(), v, [](double a, double b) { return a > b; });
    std::size_t j = static_cast<std::size_t>(it - s_.begin());
    if (j == 0) j = 1;
    if (j >= s_.size()) j = s_.size() - 1;
    const std::size_t i = j - 1;
    const Hermite c{s_[i], s_[i + 1], -p_[i], -p_[i + 1], h_};
    double lo = 0.0;
    double hi = 1.0;
    double t = (s_[i] - v) / (s_[i] - s_[i + 1]);
    for (int k = 0; k < 100; ++k) {
        const double f = c.value(t) - v;
        if (f > 0.0) lo = t; else hi = t;
        const double d = c.slope(t);
        double next = d < 0.0 ? t - f / (d * h_) : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) < 1e-15 || hi - lo < 1e-15) {
            t = next;
            break;
        }
        t = next;
    }
    return h_ * (static_cast<double>(i) + t);
}

double StableTable::quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) throw DomainError("quantile: u must lie strictly inside (0,1)");
    if (u == 0.5) return 0.0;
    if (u > 0.5) return survival_quantile(1.0 - u);
    return -survival_quantile(u);
}

}  // namespace stable_stein
