#include "commands.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "stable_stein/bounds.hpp"
#include "stable_stein/errors.hpp"
#include "stable_stein/format.hpp"
#include "stable_stein/kernels.hpp"
#include "stable_stein/stable_density.hpp"
#include "stable_stein/tables.hpp"
#include "stable_stein/wasserstein.hpp"

namespace stable_stein::cli {

namespace {

using nlohmann::json;
constexpr double kInf = std::numeric_limits<double>::infinity();

json num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_of(const RunConfig& c, const char* fallback) {
    const std::string f = c.format.empty() ? fallback : c.format;
    if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
    return f;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> d) { return v.empty() ? d : v; }

std::vector<std::uint64_t> n_values(const RunConfig& c, std::vector<double> fallback) {
    std::vector<std::uint64_t> out;
    for (double n : or_default(c.n, std::move(fallback))) {
        if (!(n >= 1.0) || n != std::floor(n) || n > 1e18) throw UsageError("--n values must be positive integers");
        out.push_back(static_cast<std::uint64_t>(n));
    }
    return out;
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& [label, vals] : t.rows) {
        json r = json::array();
        for (double v : vals) r.push_back(num(v));
        rows.push_back({{"label", label}, {"values", r}});
    }
    return {{"header", t.header}, {"rows", rows}};
}

void emit_table(const Table& t, const std::string& fmt, std::ostream& out) {
    if (fmt == "csv") {
        t.write_csv(out);
    } else {
        out << table_json(t).dump() << '\n';
    }
}

json report_json(const SteinBoundReport& r) {
    return {{"alpha", r.alpha},
            {"gamma", r.gamma},
            {"n", static_cast<std::uint64_t>(r.n)},
            {"N", num(r.N)},
            {"terms",
             {{"discrepancy", r.discrepancy_term},
              {"truncation", r.truncation_term},
              {"N_term", r.N_term},
              {"gamma_term", r.gamma_term}}},
            {"total", r.total},
            {"rate_exponent", num(r.rate_exponent)},
            {"has_log_factor", r.has_log_factor}};
}

const char* kReportCsvHeader =
    "alpha,gamma,n,N,discrepancy,truncation,N_term,gamma_term,total,rate_exponent,has_log_factor\n";

void report_csv_row(const SteinBoundReport& r, std::ostream& out) {
    out << fmt_double(r.alpha) << ',' << fmt_double(r.gamma) << ',' << fmt_double(r.n) << ',' << fmt_double(r.N)
        << ',' << fmt_double(r.discrepancy_term) << ',' << fmt_double(r.truncation_term) << ','
        << fmt_double(r.N_term) << ',' << fmt_double(r.gamma_term) << ',' << fmt_double(r.total) << ','
        << fmt_double(r.rate_exponent) << ',' << (r.has_log_factor ? "true" : "false") << '\n';
}

void cmd_constants(const RunConfig& c, std::ostream& out) {
    const auto alphas = or_default(c.alpha, default_alpha_grid());
    const auto gammas = or_default(c.gamma, default_gamma_grid());
    const Precision p = precision_from_string(c.precision);
    const Table t1 = table1(alphas, p);
    const Table t2 = table2(alphas, gammas, p);
    if (format_of(c, "csv") == "csv") {
        t1.write_csv(out);
        out << '\n';
        t2.write_csv(out);
    } else {
        out << json{{"D_alpha", table_json(t1)}, {"D_alpha_gamma", table_json(t2)}}.dump() << '\n';
    }
}

void cmd_table3(const RunConfig& c, std::ostream& out) {
    const auto n = n_values(c, {1e6});
    if (n.size() != 1) throw UsageError("table3: exactly one --n value");
    const auto alphas = or_default(c.alpha, default_alpha_grid());
    const auto gammas = or_default(c.gamma, default_gamma_grid());
    emit_table(table3(static_cast<double>(n[0]), alphas, gammas, precision_from_string(c.precision)),
               format_of(c, "csv"), out);
}

void cmd_figure1(const RunConfig& c, std::ostream& out) {
    const auto n = n_values(c, {1e6});
    if (n.size() != 1) throw UsageError("figure1: exactly one --n value");
    emit_table(figure1(static_cast<double>(n[0]), or_default(c.alpha, figure1_alpha_grid())), format_of(c, "csv"),
               out);
}

SteinBoundReport one_bound(const RunConfig& c, const DistributionSpec& spec, double n, double N, double gamma) {
    const BoundOptions opts{kernel_backend_from_string(c.backend), 1.0};
    const double alpha = spec.alpha();
    if (c.method == "main") return bound_main(spec, alpha, n, N, gamma, opts);
    if (c.method == "mthm2") {
        auto tm = spec.tail_model();
        if (!tm) throw UsageError("bound: spec has no tail-model form for --method mthm2");
        return bound_mthm2(*tm, alpha, n, N, gamma, opts);
    }
    if (c.method == "example2") {
        auto mp = spec.as_modified_pareto();
        if (!mp || spec.kind() != SpecKind::modified_pareto) {
            throw UsageError("bound: --method example2 needs --spec modified-pareto");
        }
        std::optional<double> Nopt;
        if (c.N) Nopt = *c.N;
        return example2_bound(mp->A, mp->B, mp->alpha, mp->beta, gamma, n, Nopt).report;
    }
    throw UsageError("bound: --method must be main, mthm2 or example2");
}

void cmd_bound(const RunConfig& c, std::ostream& out) {
    const DistributionSpec spec = build_spec(c);
    const auto ns = n_values(c, {1e6});
    const double N = c.N.value_or(kInf);
    std::vector<SteinBoundReport> reports;
    for (auto n_int : ns) {
        const double n = static_cast<double>(n_int);
        if (c.gamma.empty()) {
            // Minimize over gamma; only the gamma term depends on it.
            const SteinBoundReport base = one_bound(c, spec, n, N, 0.5);
            const double fixed = base.total - base.gamma_term;
            const double ell = spec.ell(n);
            const GammaOptimum g = optimize_gamma([&](double gm) {
                return fixed + D_alpha_gamma(base.alpha, gm) * std::pow(ell, -gm / base.alpha) *
                                   spec.abs_centered_moment(gm);
            });
            reports.push_back(one_bound(c, spec, n, N, g.gamma_star));
        } else {
            for (double gm : c.gamma) reports.push_back(one_bound(c, spec, n, N, gm));
        }
    }
    if (format_of(c, "json") == "json") {
        if (reports.size() == 1) {
            out << report_json(reports[0]).dump() << '\n';
        } else {
            json arr = json::array();
            for (const auto& r : reports) arr.push_back(report_json(r));
            out << arr.dump() << '\n';
        }
    } else {
        out << kReportCsvHeader;
        for (const auto& r : reports) report_csv_row(r, out);
    }
}

void cmd_rate_order(const RunConfig& c, std::ostream& out) {
    const DistributionSpec spec = build_spec(c);
    const RateOrder r = rate_order(spec, spec.alpha());
    if (format_of(c, "json") == "json") {
        out << json{{"spec", spec.name()},
                    {"alpha", spec.alpha()},
                    {"classified", r.classified},
                    {"exponent", num(r.classified ? r.exponent : std::nan(""))},
                    {"has_log_factor", r.has_log_factor},
                    {"variable", r.log_scale ? "log n" : "n"}}
                   .dump()
            << '\n';
    } else {
        out << "spec,alpha,classified,exponent,has_log_factor,variable\n"
            << spec.name() << ',' << fmt_double(spec.alpha()) << ',' << (r.classified ? "true" : "false") << ','
            << fmt_double(r.classified ? r.exponent : std::nan("")) << ',' << (r.has_log_factor ? "true" : "false")
            << ',' << (r.log_scale ? "log n" : "n") << '\n';
    }
}

double bound_total_or_nan(const DistributionSpec& spec, double n) {
    try {
        return optimize_gamma(spec, spec.alpha(), n, kInf).total_star;
    } catch (const std::exception&) {
        return std::nan("");
    }
}

void cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const DistributionSpec spec = build_spec(c);
    const auto ns = n_values(c, {1e4});
    const W1Estimator est = w1_estimator_from_string(c.estimator);
    const W1Options opts{c.seed, c.floor_pairs, 0};
    const StableLaw law(spec.alpha(), 1.0);
    err << "simulate: drawing " << c.m << " sums for " << ns.size() << " values of n\n";
    const auto batches = sample_sums_nested(spec, ns, c.m, c.seed);
    const std::string fmt = format_of(c, "csv");
    json arr = json::array();
    if (fmt == "csv") out << "n,m,estimator,w1,std_error,bias_floor,bound_total,seed\n";
    for (const auto& b : batches) {
        err << "simulate: n = " << b.n << '\n';
        const EmpiricalW1Result r = empirical_w1(b, law, est, opts);
        const double bt = bound_total_or_nan(spec, static_cast<double>(b.n));
        if (fmt == "csv") {
            out << b.n << ',' << b.m << ',' << to_string(est) << ',' << fmt_double(r.estimate) << ','
                << fmt_double(r.std_error) << ',' << fmt_double(r.bias_floor_estimate) << ',' << fmt_double(bt)
                << ',' << c.seed << '\n';
        } else {
            arr.push_back({{"n", b.n},
                           {"m", b.m},
                           {"estimator", to_string(est)},
                           {"w1", r.estimate},
                           {"std_error", num(r.std_error)},
                           {"bias_floor", r.bias_floor_estimate},
                           {"bound_total", num(bt)},
                           {"seed", c.seed}});
        }
    }
    if (fmt == "json") out << arr.dump() << '\n';
}

void cmd_rate_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const DistributionSpec spec = build_spec(c);
    const auto ns = n_values(c, {100, 316, 1000, 3162, 10000});
    err << "rate-fit: " << ns.size() << " values of n, m = " << c.m << '\n';
    const RateFit rf = fit_rate(spec, ns, c.m, c.seed, W1Options{c.seed, c.floor_pairs, 0});
    const double target = rate_order(spec, spec.alpha()).exponent;
    if (format_of(c, "json") == "json") {
        json pts = json::array();
        for (std::size_t i = 0; i < ns.size(); ++i) {
            pts.push_back({{"n", ns[i]},
                           {"w1", rf.per_n[i].estimate},
                           {"std_error", num(rf.per_n[i].std_error)},
                           {"bias_floor", rf.per_n[i].bias_floor_estimate},
                           {"dropped", static_cast<bool>(rf.fit.dropped[i])},
                           {"residual", num(rf.fit.residuals[i])}});
        }
        out << json{{"slope", rf.fit.slope},
                    {"intercept", rf.fit.intercept},
                    {"target_slope", num(target)},
                    {"m", c.m},
                    {"seed", c.seed},
                    {"points", pts}}
                   .dump()
            << '\n';
    } else {
        out << "n,w1,std_error,bias_floor,dropped,residual,slope,intercept\n";
        for (std::size_t i = 0; i < ns.size(); ++i) {
            out << ns[i] << ',' << fmt_double(rf.per_n[i].estimate) << ',' << fmt_double(rf.per_n[i].std_error) << ','
                << fmt_double(rf.per_n[i].bias_floor_estimate) << ',' << (rf.fit.dropped[i] ? "true" : "false")
                << ',' << fmt_double(rf.fit.residuals[i]) << ',' << fmt_double(rf.fit.slope) << ','
                << fmt_double(rf.fit.intercept) << '\n';
        }
    }
}

std::vector<double> x_grid(const RunConfig& c, double xmax_default, double step_default, bool symmetric) {
    const double xmax = c.xmax.value_or(xmax_default);
    const double step = c.step.value_or(step_default);
    if (!(xmax > 0.0) || !(step > 0.0)) throw UsageError("--xmax and --step must be positive");
    const auto k = static_cast<long>(std::floor(xmax / step + 1e-9));
    if (k > 10'000'000) throw UsageError("grid too large");
    std::vector<double> g;
    for (long i = symmetric ? -k : 1; i <= k; ++i) g.push_back(static_cast<double>(i) * step);
    return g;
}

void cmd_density(const RunConfig& c, std::ostream& out) {
    const StableLaw law(single_alpha(c), 1.0);
    const auto xs = x_grid(c, 5.0, 0.1, true);
    const std::string fmt = format_of(c, "csv");
    json arr = json::array();
    if (fmt == "csv") out << "x,p,cdf\n";
    for (double x : xs) {
        const double p = density(law, x);
        const double F = cdf(law, x);
        if (fmt == "csv") {
            out << fmt_double(x) << ',' << fmt_double(p) << ',' << fmt_double(F) << '\n';
        } else {
            arr.push_back({{"x", x}, {"p", p}, {"cdf", F}});
        }
    }
    if (fmt == "json") out << arr.dump() << '\n';
}

void cmd_an_solver(const RunConfig& c, std::ostream& out) {
    const double alpha = single_alpha(c);
    const double beta = c.beta.value_or(1.0);
    const double x0 = c.x0.value_or(std::exp(1.0));
    const double K0 = c.K0 ? *c.K0 : std::pow(x0, alpha) / std::pow(std::log(x0), beta);
    const auto ns = n_values(c, {1e4, 1e6, 1e8});
    const std::string fmt = format_of(c, "csv");
    json arr = json::array();
    if (fmt == "csv") out << "n,A_n,residual\n";
    for (auto n_int : ns) {
        const double n = static_cast<double>(n_int);
        const double An = log_example_A_n(K0, x0, alpha, beta, n);
        const double residual = beta == 0.0 ? K0 * n / std::pow(An, alpha) - 1.0
                                            : K0 * n * std::pow(std::log(An), beta) / std::pow(An, alpha) - 1.0;
        if (fmt == "csv") {
            out << n_int << ',' << fmt_double(An) << ',' << fmt_double(residual) << '\n';
        } else {
            arr.push_back({{"n", n_int}, {"A_n", An}, {"residual", residual}});
        }
    }
    if (fmt == "json") out << arr.dump() << '\n';
}

void cmd_kernel_profile(const RunConfig& c, std::ostream& out) {
    const DistributionSpec spec = build_spec(c);
    const auto ns = n_values(c, {1000});
    if (ns.size() != 1) throw UsageError("kernel-profile: exactly one --n value");
    const double N = c.N.value_or(10.0);
    const KernelPair kp(spec, static_cast<double>(ns[0]), N, kernel_backend_from_string(c.backend));
    const auto ts = c.t.empty() ? x_grid(c, std::isinf(N) ? 10.0 : N, 0.05, true) : c.t;
    kp.write_profile_csv(out, ts);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"constants", "table3",  "figure1",    "bound",
                                                   "rate-order", "simulate", "rate-fit",  "density",
                                                   "an-solver",  "kernel-profile"};
    return names;
}

void run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string& cmd = cfg.command;
    if (cmd == "constants") return cmd_constants(cfg, out);
    if (cmd == "table3") return cmd_table3(cfg, out);
    if (cmd == "figure1") return cmd_figure1(cfg, out);
    if (cmd == "bound") return cmd_bound(cfg, out);
    if (cmd == "rate-order") return cmd_rate_order(cfg, out);
    if (cmd == "simulate") return cmd_simulate(cfg, out, err);
    if (cmd == "rate-fit") return cmd_rate_fit(cfg, out, err);
    if (cmd == "density") return cmd_density(cfg, out);
    if (cmd == "an-solver") return cmd_an_solver(cfg, out);
    if (cmd == "kernel-profile") return cmd_kernel_profile(cfg, out);
    throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace stable_stein::cli
