#include "stable_stein/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/numerics.hpp"
#include "stable_stein/quadrature.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

void check_alpha_open(double alpha) {
    require(alpha > 0.0 && alpha < 2.0, "distribution: alpha must lie in (0,2)");
}

}  // namespace

// ---------------------------------------------------------------- PowerSeries

PowerSeries::PowerSeries(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_) {
        require(std::isfinite(t.coef) && std::isfinite(t.power), "PowerSeries: non-finite term");
    }
}

double PowerSeries::operator()(double x) const {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coef * std::pow(x, -t.power);
    return s;
}

double PowerSeries::min_power() const {
    double m = kInf;
    for (const auto& t : terms_) m = std::min(m, t.power);
    return m;
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
    std::vector<PowerTerm> out = terms_;
    out.insert(out.end(), o.terms_.begin(), o.terms_.end());
    return PowerSeries(std::move(out));
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
    std::vector<PowerTerm> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) out.push_back({a.coef * b.coef, a.power + b.power});
    }
    return PowerSeries(std::move(out));
}

PowerSeries PowerSeries::scaled(double factor) const {
    std::vector<PowerTerm> out = terms_;
    for (auto& t : out) t.coef *= factor;
    return PowerSeries(std::move(out));
}

PowerSeries PowerSeries::shifted(double shift) const {
    std::vector<PowerTerm> out = terms_;
    for (auto& t : out) t.power += shift;
    return PowerSeries(std::move(out));
}

double PowerSeries::integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    require(a > 0.0, "PowerSeries::integral: lower limit must be positive");
    double s = 0.0;
    for (const auto& t : terms_) {
        if (t.coef == 0.0) continue;
        if (std::isinf(b)) {
            require(t.power > 1.0, "PowerSeries::integral: divergent tail");
            s += t.coef * std::pow(a, 1.0 - t.power) / (t.power - 1.0);
        } else if (t.power == 1.0) {
            s += t.coef * std::log(b / a);
        } else {
            s += t.coef * (std::pow(a, 1.0 - t.power) - std::pow(b, 1.0 - t.power)) / (t.power - 1.0);
        }
    }
    return s;
}

// ---------------------------------------------------------------- TailModel

TailModel::TailModel(double alpha, double theta, double threshold, PowerSeries M1, PowerSeries M2)
    : alpha_(alpha), theta_(theta), threshold_(threshold), M1_(std::move(M1)), M2_(std::move(M2)) {
    require(alpha > 1.0 && alpha < 2.0, "TailModel: alpha must lie in (1,2)");
    require(theta > 0.0 && std::isfinite(theta), "TailModel: theta must be positive");
    require(threshold > 0.0 && std::isfinite(threshold), "TailModel: threshold must be positive");
    for (const auto* M : {&M1_, &M2_}) {
        for (const auto& t : M->terms()) require(t.power > 0.0, "TailModel: M1, M2 must vanish at infinity");
    }
    const double mass = theta * std::pow(threshold, -alpha) * (1.0 + M2_(threshold));
    if (std::fabs(mass - 1.0) > 1e-10) {
        throw DomainError("TailModel: theta A^-alpha (1 + M2(A)) must equal 1, got " + std::to_string(mass));
    }
    const PowerSeries one({{1.0, 0.0}});
    upper_ = ((one + M1_) * (one + M2_)).scaled(0.5 * theta).shifted(alpha);
    lower_ = ((one + M1_.scaled(-1.0)) * (one + M2_)).scaled(0.5 * theta).shifted(alpha);
    // Tails must be probabilities that do not increase.
    double prev_u = kInf;
    double prev_l = kInf;
    for (int i = 0; i <= 240; ++i) {
        const double x = threshold * std::pow(10.0, i / 20.0);
        const double u = upper_(x);
        const double l = lower_(x);
        require(u >= 0.0 && l >= 0.0, "TailModel: |M1| <= 1 and 1 + M2 >= 0 required beyond the threshold");
        require(u <= prev_u * (1.0 + 1e-12) && l <= prev_l * (1.0 + 1e-12),
                "TailModel: tail functions must be non-increasing");
        prev_u = u;
        prev_l = l;
    }
    const double A = threshold;
    mean_ = (A * upper_(A) + upper_.integral(A, kInf)) - (A * lower_(A) + lower_.integral(A, kInf));
}

TailModel TailModel::normalized(double alpha, double threshold, PowerSeries M1, PowerSeries M2) {
    require(threshold > 0.0, "TailModel: threshold must be positive");
    const double theta = std::pow(threshold, alpha) / (1.0 + M2(threshold));
    return TailModel(alpha, theta, threshold, std::move(M1), std::move(M2));
}

double TailModel::ell(double n) const {
    require(n > 0.0, "ell_n: n must be positive");
    return alpha_ * theta_ / (2.0 * d_alpha(alpha_)) * n;
}

double TailModel::b_t(double n, double t) const { return std::pow(ell(n), 1.0 / alpha_) * t + mean_; }

double TailModel::R_t(double n, double t) const {
    const double b = b_t(n, t);
    return 0.5 * std::pow(b, -alpha_) * (1.0 + M1_(b)) * (1.0 + M2_(b)) * mean_;
}

double TailModel::r_t(double n, double t) const {
    const double b = b_t(n, t);
    require(b > 0.0, "r_t: b_t must be positive");
    const PowerSeries Mx = M1_ + M2_ + M1_ * M2_;
    return 0.5 * std::pow(b, 1.0 - alpha_) * Mx(b) + 0.5 * Mx.shifted(alpha_).integral(b, kInf);
}

double TailModel::delta_n(double n, double N) const {
    if (std::isinf(N)) return 1.0;
    return 1.0 - std::pow(ell(n), -1.0 / alpha_) / N * std::fabs(mean_);
}

// ---------------------------------------------------------------- DistributionSpec

ModifiedPareto hall_to_modified_pareto(const HallTransform& h) {
    const double beta = h.alpha * (h.c + 1.0);
    return {h.alpha, beta, 2.0 * h.a * h.alpha, 2.0 * h.b * h.alpha};
}

DistributionSpec::DistributionSpec(Variant v) : v_(std::move(v)) {
    std::visit(
        [this](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Pareto>) {
                check_alpha_open(s.alpha);
                up_ = PowerSeries({{0.5, s.alpha}});
                low_ = up_;
                threshold_ = 1.0;
            } else if constexpr (std::is_same_v<T, ModifiedPareto>) {
                check_alpha_open(s.alpha);
                require(s.beta > s.alpha, "ModifiedPareto: beta must exceed alpha");
                require(s.A > 0.0 && s.B >= 0.0, "ModifiedPareto: A > 0 and B >= 0 required");
                require(std::fabs(s.A / s.alpha + s.B / s.beta - 1.0) <= 1e-12,
                        "ModifiedPareto: A/alpha + B/beta must equal 1");
                up_ = PowerSeries({{0.5 * s.A / s.alpha, s.alpha}, {0.5 * s.B / s.beta, s.beta}});
                low_ = up_;
                threshold_ = 1.0;
            } else if constexpr (std::is_same_v<T, HallTransform>) {
                check_alpha_open(s.alpha);
                require(s.a > 0.0 && s.b >= 0.0 && s.c > 0.0, "HallTransform: a > 0, b >= 0, c > 0 required");
                require(std::fabs(2.0 * s.a + 2.0 * s.b / (s.c + 1.0) - 1.0) <= 1e-12,
                        "HallTransform: 2a + 2b/(c+1) must equal 1");
                const ModifiedPareto m = hall_to_modified_pareto(s);
                up_ = PowerSeries({{0.5 * m.A / m.alpha, m.alpha}, {0.5 * m.B / m.beta, m.beta}});
                low_ = up_;
                threshold_ = 1.0;
            } else if constexpr (std::is_same_v<T, TailModel>) {
                up_ = s.upper_series();
                low_ = s.lower_series();
                threshold_ = s.threshold();
                mean_ = s.mean();
            } else {
                check_alpha_open(s.alpha);
                require(s.K0 > 0.0 && s.x0 > 1.0, "LogPerturbedPareto: K0 > 0 and x0 > 1 required");
                const double lx = std::log(s.x0);
                require(std::fabs(s.K0 * std::pow(lx, s.beta) * std::pow(s.x0, -s.alpha) - 1.0) <= 1e-10,
                        "LogPerturbedPareto: K0 (log x0)^beta / x0^alpha must equal 1");
                require(s.beta <= s.alpha * lx * (1.0 + 1e-12),
                        "LogPerturbedPareto: tail must be non-increasing beyond x0 (need log x0 >= beta/alpha)");
                log_tail_ = true;
                threshold_ = s.x0;
            }
        },
        v_);
}

DistributionSpec DistributionSpec::pareto(double alpha) { return DistributionSpec(Pareto{alpha}); }

DistributionSpec DistributionSpec::modified_pareto(double alpha, double beta, double A, double B) {
    return DistributionSpec(ModifiedPareto{alpha, beta, A, B});
}

DistributionSpec DistributionSpec::modified_pareto_balanced(double alpha, double beta) {
    const double A = alpha * beta / (alpha + beta);
    return DistributionSpec(ModifiedPareto{alpha, beta, A, A});
}

DistributionSpec DistributionSpec::hall(double alpha, double a, double b, double c) {
    return DistributionSpec(HallTransform{alpha, a, b, c});
}

DistributionSpec DistributionSpec::log_pareto(double alpha, double beta, double K0, double x0) {
    return DistributionSpec(LogPerturbedPareto{alpha, beta, K0, x0});
}

DistributionSpec DistributionSpec::general_tail(TailModel model) { return DistributionSpec(std::move(model)); }

SpecKind DistributionSpec::kind() const {
    switch (v_.index()) {
        case 0: return SpecKind::pareto;
        case 1: return SpecKind::modified_pareto;
        case 2: return SpecKind::general_tail;
        case 3: return SpecKind::hall;
        default: return SpecKind::log_pareto;
    }
}

std::string DistributionSpec::name() const {
    switch (kind()) {
        case SpecKind::pareto: return "pareto";
        case SpecKind::modified_pareto: return "modified-pareto";
        case SpecKind::general_tail: return "general-tail";
        case SpecKind::hall: return "hall";
        case SpecKind::log_pareto: return "log-pareto";
    }
    return "unknown";
}

double DistributionSpec::alpha() const {
    return std::visit(
        [](const auto& s) {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, TailModel>) {
                return s.alpha();
            } else {
                return s.alpha;
            }
        },
        v_);
}

bool DistributionSpec::symmetric() const {
    if (const auto* t = std::get_if<TailModel>(&v_)) return t->symmetric();
    return true;
}

double DistributionSpec::mean() const {
    if (!(alpha() > 1.0)) throw DomainError("mean: E|xi| is infinite for alpha <= 1");
    return mean_;
}

double DistributionSpec::threshold() const { return threshold_; }

double DistributionSpec::upper_formula(double x) const {
    if (log_tail_) {
        const auto& s = std::get<LogPerturbedPareto>(v_);
        return 0.5 * s.K0 * std::pow(std::log(x), s.beta) * std::pow(x, -s.alpha);
    }
    return up_(x);
}

double DistributionSpec::lower_formula(double x) const {
    if (log_tail_) return upper_formula(x);
    return low_(x);
}

double DistributionSpec::formula_integral(bool upper, double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    if (!log_tail_) return upper ? up_.integral(lo, hi) : low_.integral(lo, hi);
    const auto& s = std::get<LogPerturbedPareto>(v_);
    // r = e^u: (K0/2) u^beta e^{(1-alpha) u}
    auto f = [&](double u) { return 0.5 * s.K0 * std::pow(u, s.beta) * std::exp((1.0 - s.alpha) * u); };
    const double ulo = std::log(lo);
    double uhi;
    if (std::isinf(hi)) {
        require(s.alpha > 1.0, "tail integral diverges for alpha <= 1");
        uhi = std::max(ulo, std::max(s.beta, 0.0) / (s.alpha - 1.0)) + 50.0 / (s.alpha - 1.0);
    } else {
        uhi = std::log(hi);
    }
    return quad::integrate(f, ulo, uhi, 1e-300, 1e-13, "log-pareto tail integral did not converge");
}

double DistributionSpec::upper_tail(double x) const {
    const double A = threshold_;
    if (x >= A) return upper_formula(x);
    if (x > -A) return upper_formula(A);
    return 1.0 - lower_formula(-x);
}

double DistributionSpec::lower_tail(double x) const {
    const double A = threshold_;
    if (x >= A) return lower_formula(x);
    if (x > -A) return lower_formula(A);
    return 1.0 - upper_formula(-x);
}

double DistributionSpec::abs_tail(double x) const {
    if (x < 0.0) return 1.0;
    return upper_tail(x) + lower_tail(x);
}

double DistributionSpec::upper_tail_integral(double a, double b) const {
    require(std::isfinite(a), "tail integral: lower limit must be finite");
    if (!(b > a)) return 0.0;
    const double A = threshold_;
    double s = 0.0;
    // (-inf, -A]: 1 - P(xi < r)
    if (a < -A) {
        const double hi = std::min(b, -A);
        s += (hi - a) - formula_integral(false, -hi, -a);
    }
    // (-A, A): constant
    {
        const double lo = std::max(a, -A);
        const double hi = std::min(b, A);
        if (hi > lo) s += (hi - lo) * upper_formula(A);
    }
    if (b > A) s += formula_integral(true, std::max(a, A), b);
    return s;
}

double DistributionSpec::lower_tail_integral(double a, double b) const {
    require(std::isfinite(a), "tail integral: lower limit must be finite");
    if (!(b > a)) return 0.0;
    const double A = threshold_;
    double s = 0.0;
    if (a < -A) {
        const double hi = std::min(b, -A);
        s += (hi - a) - formula_integral(true, -hi, -a);
    }
    {
        const double lo = std::max(a, -A);
        const double hi = std::min(b, A);
        if (hi > lo) s += (hi - lo) * lower_formula(A);
    }
    if (b > A) s += formula_integral(false, std::max(a, A), b);
    return s;
}

double DistributionSpec::abs_centered_moment(double gamma) const {
    const double alpha = this->alpha();
    require(gamma > 0.0 && gamma < alpha, "abs_centered_moment: gamma must lie in (0, alpha)");
    if (!(alpha > 1.0)) throw DomainError("abs_centered_moment: E|xi| is infinite for alpha <= 1");
    const double m = mean_;
    const double A = threshold_;
    if (!log_tail_ && m == 0.0) {
        return std::pow(A, gamma) + gamma * (up_ + low_).shifted(1.0 - gamma).integral(A, kInf);
    }
    auto g = [&](double r) { return upper_tail(m + r) + lower_tail(r - m); };
    std::vector<double> br;
    for (double c : {A - m, A + m, -A - m, m - A}) {
        if (c > 0.0) br.push_back(c);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    if (br.empty()) br.push_back(1.0);
    const double tol = 1e-13;
    // [0, r1] with u = r^gamma
    const double r1 = br.front();
    double total = quad::integrate([&](double u) { return g(std::pow(u, 1.0 / gamma)); }, 0.0,
                                   std::pow(r1, gamma), 1e-300, tol, "abs_centered_moment: quadrature failed");
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        total += quad::integrate([&](double r) { return gamma * std::pow(r, gamma - 1.0) * g(r); }, br[i],
                                 br[i + 1], 1e-300, tol, "abs_centered_moment: quadrature failed");
    }
    const double rk = br.back();
    double beta_extra = 0.0;
    if (const auto* s = std::get_if<LogPerturbedPareto>(&v_)) beta_extra = std::max(s->beta, 0.0);
    const double S = (80.0 + 10.0 * beta_extra) / (alpha - gamma);
    total += quad::integrate(
        [&](double s) {
            const double r = rk * std::exp(s);
            return gamma * std::pow(r, gamma) * g(r);
        },
        0.0, S, 1e-300, tol, "abs_centered_moment: quadrature failed");
    return total;
}

double DistributionSpec::centered_truncated_first_moment(double x) const {
    require(alpha() > 1.0, "truncated moment: E|xi| is infinite for alpha <= 1");
    const double m = mean_;
    if (x <= 0.0) x = 0.0;
    const double tail = upper_tail(m + x) + lower_tail(x - m);
    return x * tail + upper_tail_integral(m + x, kInf) + lower_tail_integral(x - m, kInf);
}

double DistributionSpec::ell(double n) const {
    require(n > 0.0, "ell_n: n must be positive");
    const double alpha = this->alpha();
    switch (kind()) {
        case SpecKind::pareto: return alpha / (2.0 * d_alpha(alpha)) * n;
        case SpecKind::modified_pareto:
            return std::get<ModifiedPareto>(v_).A / (2.0 * d_alpha(alpha)) * n;
        case SpecKind::hall:
            return hall_to_modified_pareto(std::get<HallTransform>(v_)).A / (2.0 * d_alpha(alpha)) * n;
        case SpecKind::general_tail: return std::get<TailModel>(v_).ell(n);
        case SpecKind::log_pareto: {
            const auto& s = std::get<LogPerturbedPareto>(v_);
            const double An = log_example_A_n(s.K0, s.x0, s.alpha, s.beta, n);
            return alpha / (2.0 * d_alpha(alpha)) * std::pow(An, alpha);
        }
    }
    return 0.0;
}

std::optional<ModifiedPareto> DistributionSpec::as_modified_pareto() const {
    switch (kind()) {
        case SpecKind::pareto: {
            const double a = std::get<Pareto>(v_).alpha;
            return ModifiedPareto{a, 2.0 * a + 2.0, a, 0.0};
        }
        case SpecKind::modified_pareto: return std::get<ModifiedPareto>(v_);
        case SpecKind::hall: return hall_to_modified_pareto(std::get<HallTransform>(v_));
        default: return std::nullopt;
    }
}

std::optional<TailModel> DistributionSpec::tail_model() const {
    if (const auto* t = std::get_if<TailModel>(&v_)) return *t;
    const auto mp = as_modified_pareto();
    if (!mp) return std::nullopt;
    PowerSeries M2;
    if (mp->B > 0.0) M2 = PowerSeries({{mp->B * mp->alpha / (mp->A * mp->beta), mp->beta - mp->alpha}});
    return TailModel(mp->alpha, mp->A / mp->alpha, 1.0, PowerSeries{}, M2);
}

}  // namespace stable_stein
