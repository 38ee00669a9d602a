#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "stable_stein/errors.hpp"

using stable_stein::cli::RunConfig;

namespace {

const char* kDescription =
    "Explicit W1 bounds for stable approximation of heavy-tailed sums.\n"
    "CSV layouts:\n"
    "  constants   alpha,<alphas>  /  gamma,<alphas>\n"
    "  table3      gamma,<alphas>\n"
    "  figure1     alpha,gamma_star_case1,gamma_star_case2,gamma_star_case3,gamma_star_case4\n"
    "  bound       alpha,gamma,n,N,discrepancy,truncation,N_term,gamma_term,total,rate_exponent,has_log_factor\n"
    "  simulate    n,m,estimator,w1,std_error,bias_floor,bound_total,seed\n"
    "  rate-fit    n,w1,std_error,bias_floor,dropped,residual,slope,intercept\n"
    "  density     x,p,cdf\n"
    "  an-solver   n,A_n,residual\n"
    "  kernel-profile  t,stable_kernel,k_function,abs_diff";

struct Binding {
    CLI::Option* opt;
    std::function<void(RunConfig&)> apply;
};

struct Flags {
    RunConfig v;
    std::string N;
    double beta = 0, A = 0, B = 0, c = 0, hall_a = 0, K0 = 0, x0 = 0, xmax = 0, step = 0;
    std::string config;
};

double parse_real(const std::string& s) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw stable_stein::UsageError("not a number: " + s);
    return d;
}

void add_flags(CLI::App* sub, Flags& f, std::vector<Binding>& b) {
    auto list = [&](const char* name, std::vector<double>& dst, std::vector<double> RunConfig::*field,
                    const char* help) {
        auto* o = sub->add_option(name, dst, help)->delimiter(',');
        b.push_back({o, [&dst, field](RunConfig& c) { c.*field = dst; }});
    };
    auto real = [&](const char* name, double& dst, std::optional<double> RunConfig::*field, const char* help) {
        auto* o = sub->add_option(name, dst, help);
        b.push_back({o, [&dst, field](RunConfig& c) { c.*field = dst; }});
    };
    list("--alpha", f.v.alpha, &RunConfig::alpha, "stability index (comma list for grids)");
    list("--gamma", f.v.gamma, &RunConfig::gamma, "moment order gamma (comma list; bound: omitted = optimize)");
    list("--n", f.v.n, &RunConfig::n, "number of summands (comma list)");
    list("--t", f.v.t, &RunConfig::t, "kernel-profile evaluation points");
    auto* oN = sub->add_option("--N", f.N, "truncation level, 'inf' allowed");
    b.push_back({oN, [&f](RunConfig& c) { c.N = parse_real(f.N); }});
    real("--beta", f.beta, &RunConfig::beta, "second tail exponent / log power");
    real("--A", f.A, &RunConfig::A, "modified-pareto coefficient A");
    real("--B", f.B, &RunConfig::B, "modified-pareto coefficient B");
    real("--c", f.c, &RunConfig::c, "hall exponent c");
    real("--hall-a", f.hall_a, &RunConfig::hall_a, "hall coefficient a (default 0.25)");
    real("--K0", f.K0, &RunConfig::K0, "log-pareto constant (default: normalized)");
    real("--x0", f.x0, &RunConfig::x0, "log-pareto threshold (default e)");
    real("--xmax", f.xmax, &RunConfig::xmax, "grid half-width");
    real("--step", f.step, &RunConfig::step, "grid step");
    auto str = [&](const char* name, std::string& dst, std::string RunConfig::*field, const char* help) {
        auto* o = sub->add_option(name, dst, help);
        b.push_back({o, [&dst, field](RunConfig& c) { c.*field = dst; }});
    };
    str("--spec", f.v.spec, &RunConfig::spec, "pareto | modified-pareto | hall | log-pareto");
    str("--format", f.v.format, &RunConfig::format, "csv | json");
    str("--out", f.v.out, &RunConfig::out, "output file (default stdout)");
    str("--precision", f.v.precision, &RunConfig::precision, "double | extended");
    str("--backend", f.v.backend, &RunConfig::backend, "closed_form | quadrature");
    str("--estimator", f.v.estimator, &RunConfig::estimator, "bias_corrected | two_sample | one_sample_quantile");
    str("--method", f.v.method, &RunConfig::method, "bound: main | mthm2 | example2");
    auto* os = sub->add_option("--seed", f.v.seed, "RNG seed");
    b.push_back({os, [&f](RunConfig& c) { c.seed = f.v.seed; }});
    auto* om = sub->add_option("--m", f.v.m, "replicates per n");
    b.push_back({om, [&f](RunConfig& c) { c.m = f.v.m; }});
    auto* ofp = sub->add_option("--floor-pairs", f.v.floor_pairs, "independent stable pairs for the bias floor");
    b.push_back({ofp, [&f](RunConfig& c) { c.floor_pairs = f.v.floor_pairs; }});
    sub->add_option("--config", f.config, "JSON config file; flags override it");
}

void print_error_json(const char* type, const std::string& msg) {
    nlohmann::json j{{"error", {{"type", type}, {"message", msg}}}};
    std::cout << j.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{kDescription, "stable-stein"};
    app.require_subcommand(1);
    Flags flags;
    std::vector<std::pair<CLI::App*, std::vector<Binding>>> subs;
    for (const auto& name : stable_stein::cli::command_names()) {
        auto* sub = app.add_subcommand(name);
        std::vector<Binding> b;
        add_flags(sub, flags, b);
        subs.emplace_back(sub, std::move(b));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    RunConfig cfg;
    try {
        for (auto& [sub, bindings] : subs) {
            if (!sub->parsed()) continue;
            if (!flags.config.empty()) {
                std::ifstream in(flags.config);
                if (!in) throw stable_stein::UsageError("cannot read config file " + flags.config);
                nlohmann::json j;
                try {
                    in >> j;
                } catch (const nlohmann::json::exception& e) {
                    throw stable_stein::UsageError(std::string("config: ") + e.what());
                }
                cfg = stable_stein::cli::from_json(j);
            }
            cfg.command = sub->get_name();
            for (auto& bd : bindings) {
                if (bd.opt->count() > 0) bd.apply(cfg);
            }
        }
    } catch (const stable_stein::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
    std::cerr << stable_stein::cli::to_json(cfg).dump() << '\n';

    std::ostringstream buffer;
    try {
        stable_stein::cli::run_command(cfg, buffer, std::cerr);
    } catch (const stable_stein::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const stable_stein::ConvergenceError& e) {
        nlohmann::json j{{"error",
                          {{"type", "convergence"},
                           {"message", e.what()},
                           {"partial_estimate", e.partial_estimate()},
                           {"achieved_error", e.achieved_error()}}}};
        std::cout << j.dump() << std::endl;
        return 1;
    } catch (const stable_stein::DomainError& e) {
        print_error_json("domain", e.what());
        return 1;
    } catch (const std::exception& e) {
        print_error_json("numeric", e.what());
        return 1;
    }
    if (cfg.out.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            print_error_json("io", "cannot open " + cfg.out);
            return 1;
        }
        f << buffer.str();
    }
    return 0;
}
