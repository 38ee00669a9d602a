#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include "stable_stein/errors.hpp"

namespace stable_stein {

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) noexcept {
        add(x);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite sign.
// Illinois false position with bisection fallback; x tolerance is absolute.
template <class F>
double find_root(F&& f, double lo, double hi, double xtol = 1e-14, int max_iter = 300) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw DomainError("find_root: interval does not bracket a root");
    }
    int side = 0;
    for (int it = 0; it < max_iter; ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi) || it % 4 == 3) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
        if (hi - lo <= xtol * (1.0 + std::fabs(lo))) return 0.5 * (lo + hi);
    }
    throw ConvergenceError("find_root: iteration limit", 0.5 * (lo + hi), hi - lo);
}

inline bool is_pos_inf(double x) noexcept { return x == std::numeric_limits<double>::infinity(); }

}  // namespace stable_stein
