#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stable_stein {

// c * x^(-power)
struct PowerTerm {
    double coef;
    double power;
};

// Finite sum of power terms, used for M1, M2 and for power-law tails.
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(std::vector<PowerTerm> terms);

    double operator()(double x) const;
    const std::vector<PowerTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    // Smallest power, +inf when empty.
    double min_power() const;

    PowerSeries operator+(const PowerSeries& o) const;
    PowerSeries operator*(const PowerSeries& o) const;
    PowerSeries scaled(double factor) const;
    // Multiply by x^(-shift).
    PowerSeries shifted(double shift) const;

    // int_a^b f(x) dx with b possibly +inf; every power must exceed 1 when b is infinite.
    double integral(double a, double b) const;

private:
    std::vector<PowerTerm> terms_;
};

// Tail model of conditions (i') and (ii'): for |x| >= threshold,
// P(xi > x) = (1/2)(1 + M1(x))(1 + M2(x)) theta x^-alpha,
// P(xi < -x) = (1/2)(1 - M1(x))(1 + M2(x)) theta x^-alpha, no mass inside (-threshold, threshold).
class TailModel {
public:
    TailModel(double alpha, double theta, double threshold, PowerSeries M1, PowerSeries M2);
    // Chooses theta so that the law has total mass one.
    static TailModel normalized(double alpha, double threshold, PowerSeries M1, PowerSeries M2);

    double alpha() const { return alpha_; }
    double theta() const { return theta_; }
    double threshold() const { return threshold_; }
    const PowerSeries& M1() const { return M1_; }
    const PowerSeries& M2() const { return M2_; }
    double mean() const { return mean_; }
    bool symmetric() const { return M1_.empty(); }

    // Power-series forms of P(xi > x) and P(xi < -x) on x >= threshold.
    const PowerSeries& upper_series() const { return upper_; }
    const PowerSeries& lower_series() const { return lower_; }

    double ell(double n) const;
    double b_t(double n, double t) const;
    double R_t(double n, double t) const;
    double r_t(double n, double t) const;
    double delta_n(double n, double N) const;

private:
    double alpha_;
    double theta_;
    double threshold_;
    PowerSeries M1_;
    PowerSeries M2_;
    PowerSeries upper_;
    PowerSeries lower_;
    double mean_;
};

struct Pareto {
    double alpha;
};

// Density A/(2|x|^(1+alpha)) + B/(2|x|^(1+beta)) on |x| > 1, A/alpha + B/beta = 1.
struct ModifiedPareto {
    double alpha;
    double beta;
    double A;
    double B;
};

// X = sgn(Z)|Z|^(-1/alpha) with Z of density a + b|z|^c on [-1, 1], 2a + 2b/(c+1) = 1.
struct HallTransform {
    double alpha;
    double a;
    double b;
    double c;
};

// P(|xi| > x) = K0 (log x)^beta / x^alpha for x >= x0, symmetric, K0 (log x0)^beta = x0^alpha.
struct LogPerturbedPareto {
    double alpha;
    double beta;
    double K0;
    double x0;
};

enum class SpecKind { pareto, modified_pareto, general_tail, hall, log_pareto };

class DistributionSpec {
public:
    using Variant = std::variant<Pareto, ModifiedPareto, TailModel, HallTransform, LogPerturbedPareto>;

    DistributionSpec(Variant v);  // NOLINT: implicit by design

    static DistributionSpec pareto(double alpha);
    static DistributionSpec modified_pareto(double alpha, double beta, double A, double B);
    // A = B = alpha beta / (alpha + beta).
    static DistributionSpec modified_pareto_balanced(double alpha, double beta);
    static DistributionSpec hall(double alpha, double a, double b, double c);
    static DistributionSpec log_pareto(double alpha, double beta, double K0, double x0);
    static DistributionSpec general_tail(TailModel model);

    const Variant& variant() const { return v_; }
    SpecKind kind() const;
    std::string name() const;

    double alpha() const;
    bool symmetric() const;
    double mean() const;
    // No mass strictly inside (-threshold, threshold).
    double threshold() const;

    // P(xi > x) and P(xi < -x) for any real x; abs_tail is P(|xi| > x).
    double upper_tail(double x) const;
    double lower_tail(double x) const;
    double abs_tail(double x) const;

    // int_a^b P(xi > r) dr and int_a^b P(xi < -r) dr, b may be +inf.
    double upper_tail_integral(double a, double b) const;
    double lower_tail_integral(double a, double b) const;

    // E|xi - E xi|^gamma, gamma in (0, alpha).
    double abs_centered_moment(double gamma) const;
    // E|xi - E xi| 1{|xi - E xi| > x}.
    double centered_truncated_first_moment(double x) const;

    double ell(double n) const;

    // Equivalent (i')/(ii') model when one exists with finitely many power terms.
    std::optional<TailModel> tail_model() const;
    // Pareto, ModifiedPareto and Hall all reduce to ModifiedPareto form.
    std::optional<ModifiedPareto> as_modified_pareto() const;

private:
    double upper_formula(double x) const;
    double lower_formula(double x) const;
    double formula_integral(bool upper, double lo, double hi) const;

    Variant v_;
    bool log_tail_ = false;
    double threshold_ = 1.0;
    double mean_ = 0.0;
    PowerSeries up_;
    PowerSeries low_;
};

ModifiedPareto hall_to_modified_pareto(const HallTransform& h);

}  // namespace stable_stein
