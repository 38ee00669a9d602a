#include "stable_stein/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace stable_stein::quad {

namespace {

std::vector<Node> build_rule(int n) {
    std::vector<Node> rule(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        // One more derivative evaluation at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule[static_cast<std::size_t>(i)] = {-x, w};
        rule[static_cast<std::size_t>(n - 1 - i)] = {x, w};
    }
    if (n % 2 == 1) rule[static_cast<std::size_t>(n / 2)].x = 0.0;
    return rule;
}

}  // namespace

const std::vector<Node>& gauss_legendre_rule(int order) {
    if (order < 1 || order > 512) throw UsageError("gauss_legendre_rule: order out of range");
    static std::mutex mu;
    static std::map<int, std::vector<Node>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

}  // namespace stable_stein::quad
