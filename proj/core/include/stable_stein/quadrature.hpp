#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "stable_stein/errors.hpp"

namespace stable_stein::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = false;
    int evaluations = 0;
};

struct Node {
    double x;
    double w;
};

// Gauss-Legendre nodes and weights on [-1, 1], computed once per order.
const std::vector<Node>& gauss_legendre_rule(int order);

template <class F>
double gauss_legendre(F&& f, double a, double b, int order = 20) {
    const auto& rule = gauss_legendre_rule(order);
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (const auto& nd : rule) s += nd.w * f(c + h * nd.x);
    return s * h;
}

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {a, b, resk * h, std::fabs((resk - resg) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15). Never throws; check `converged`.
template <class F>
Result gauss_kronrod(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
                     int max_segments = 4000) {
    Result r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    r.evaluations = 15;
    double total = first.value;
    double err = first.error;
    heap.push(first);
    int segments = 1;
    while (err > std::max(abs_tol, rel_tol * std::fabs(total))) {
        if (segments >= max_segments) break;
        auto worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        r.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }
    // Re-sum to shed drift from the running updates.
    double v = 0.0;
    double e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    r.value = v;
    r.abs_error = e;
    r.converged = e <= std::max(abs_tol, rel_tol * std::fabs(v)) * 1.0000001;
    return r;
}

// Same as gauss_kronrod but throws ConvergenceError carrying the partial estimate.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-12,
                 const char* what = "quadrature did not converge") {
    Result r = gauss_kronrod(f, a, b, abs_tol, rel_tol);
    if (!r.converged) throw ConvergenceError(what, r.value, r.abs_error);
    return r.value;
}

}  // namespace stable_stein::quad
