#include "stable_stein/tables.hpp"

#include <ostream>

#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/format.hpp"
#include "stable_stein/special.hpp"

namespace stable_stein {

namespace {

std::vector<std::string> header_with(const std::string& first, std::span<const double> cols) {
    std::vector<std::string> h{first};
    for (double c : cols) h.push_back(fmt_double(c));
    return h;
}

void require_nonempty(std::span<const double> g, const char* what) {
    if (g.empty()) throw UsageError(std::string("empty ") + what + " grid");
}

double figure1_case(int which, double alpha, double n) {
    if (which == 1) {
        return optimize_gamma([&](double g) { return example1_total(alpha, g, n); }).gamma_star;
    }
    const double beta = which == 2 ? 4.0 : (which == 3 ? 2.0 : alpha + 0.1);
    const double A = alpha * beta / (alpha + beta);
    const Example2Result base = example2_bound(A, A, alpha, beta, 0.5, n);
    const double fixed = base.report.total - base.report.gamma_term;
    const double ell = base.ell;
    return optimize_gamma([&](double g) {
               return fixed + D_alpha_gamma(alpha, g) * (A / (alpha - g) + A / (beta - g)) *
                                  std::pow(ell, -g / alpha);
           })
        .gamma_star;
}

}  // namespace

std::string to_string(Precision p) { return p == Precision::extended ? "extended" : "double"; }

Precision precision_from_string(const std::string& s) {
    if (s == "double" || s == "standard") return Precision::standard;
    if (s == "extended") return Precision::extended;
    throw UsageError("unknown precision: " + s);
}

void Table::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& [label, vals] : rows) {
        os << label;
        for (double v : vals) os << ',' << fmt_double(v);
        os << '\n';
    }
}

std::vector<double> default_alpha_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back((10 + i) / 10.0);
    return g;
}

std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

std::vector<double> figure1_alpha_grid() {
    std::vector<double> g;
    for (int j = 1; j <= 99; ++j) g.push_back((100 + j) / 100.0);
    return g;
}

Table table1(std::span<const double> alphas, Precision p) {
    require_nonempty(alphas, "alpha");
    Table t{header_with("alpha", alphas), {}};
    std::vector<double> row;
    for (double a : alphas) {
        row.push_back(p == Precision::extended ? static_cast<double>(D_alpha(static_cast<long double>(a)))
                                               : D_alpha(a));
    }
    t.rows.emplace_back("D_alpha", std::move(row));
    return t;
}

Table table2(std::span<const double> alphas, std::span<const double> gammas, Precision p) {
    require_nonempty(alphas, "alpha");
    require_nonempty(gammas, "gamma");
    Table t{header_with("gamma", alphas), {}};
    for (double g : gammas) {
        std::vector<double> row;
        for (double a : alphas) {
            row.push_back(p == Precision::extended
                              ? static_cast<double>(D_alpha_gamma(static_cast<long double>(a),
                                                                  static_cast<long double>(g)))
                              : D_alpha_gamma(a, g));
        }
        t.rows.emplace_back(fmt_double(g), std::move(row));
    }
    return t;
}

Table table3(double n, std::span<const double> alphas, std::span<const double> gammas, Precision p) {
    require_nonempty(alphas, "alpha");
    require_nonempty(gammas, "gamma");
    if (!(n >= 1.0)) throw DomainError("table3: n must be a positive integer");
    Table t{header_with("gamma", alphas), {}};
    for (double g : gammas) {
        std::vector<double> row;
        for (double a : alphas) {
            if (!(a > 1.0 && a < 2.0) || !(g > 0.0 && g < 1.0)) {
                throw DomainError("table3: need alpha in (1,2) and gamma in (0,1)");
            }
            row.push_back(p == Precision::extended
                              ? static_cast<double>(example1_total<long double>(a, g, n))
                              : example1_total<double>(a, g, n));
        }
        t.rows.emplace_back(fmt_double(g), std::move(row));
    }
    return t;
}

Table figure1(double n, std::span<const double> alphas) {
    require_nonempty(alphas, "alpha");
    Table t{{"alpha", "gamma_star_case1", "gamma_star_case2", "gamma_star_case3", "gamma_star_case4"}, {}};
    for (double a : alphas) {
        std::vector<double> row;
        for (int c = 1; c <= 4; ++c) row.push_back(figure1_case(c, a, n));
        t.rows.emplace_back(fmt_double(a), std::move(row));
    }
    return t;
}

}  // namespace stable_stein
