#include "run_config.hpp"

#include <cmath>
#include <set>

#include "stable_stein/errors.hpp"

namespace stable_stein::cli {

namespace {

using nlohmann::json;

json number_or_inf(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        try {
            std::size_t pos = 0;
            const double d = std::stod(s, &pos);
            if (pos == s.size()) return d;
        } catch (const std::exception&) {
        }
    }
    throw UsageError("config: '" + key + "' must be a number");
}

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? json(number_or_inf(*v)) : json(nullptr);
}

void get_opt(const json& j, const char* key, std::optional<double>& dst) {
    if (!j.contains(key) || j[key].is_null()) return;
    dst = read_number(j[key], key);
}

void get_list(const json& j, const char* key, std::vector<double>& dst) {
    if (!j.contains(key) || j[key].is_null()) return;
    dst.clear();
    if (j[key].is_array()) {
        for (const auto& v : j[key]) dst.push_back(read_number(v, key));
    } else {
        dst.push_back(read_number(j[key], key));
    }
}

template <class T>
void get_plain(const json& j, const char* key, T& dst) {
    if (!j.contains(key) || j[key].is_null()) return;
    try {
        dst = j[key].get<T>();
    } catch (const json::exception&) {
        throw UsageError(std::string("config: bad value for '") + key + "'");
    }
}

}  // namespace

json to_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["spec"] = c.spec;
    j["alpha"] = c.alpha;
    j["gamma"] = c.gamma;
    j["n"] = c.n;
    put_opt(j, "N", c.N);
    put_opt(j, "beta", c.beta);
    put_opt(j, "A", c.A);
    put_opt(j, "B", c.B);
    put_opt(j, "c", c.c);
    put_opt(j, "hall_a", c.hall_a);
    put_opt(j, "K0", c.K0);
    put_opt(j, "x0", c.x0);
    j["seed"] = c.seed;
    j["m"] = c.m;
    j["format"] = c.format;
    j["out"] = c.out;
    j["precision"] = c.precision;
    put_opt(j, "xmax", c.xmax);
    put_opt(j, "step", c.step);
    j["t"] = c.t;
    j["backend"] = c.backend;
    j["estimator"] = c.estimator;
    j["method"] = c.method;
    j["floor_pairs"] = c.floor_pairs;
    return j;
}

RunConfig from_json(const json& j) {
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    static const std::set<std::string> known = {
        "command", "spec", "alpha", "gamma", "n", "N", "beta", "A", "B", "c", "hall_a", "K0", "x0",
        "seed", "m", "format", "out", "precision", "xmax", "step", "t", "backend", "estimator",
        "method", "floor_pairs"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw UsageError("config: unknown key '" + key + "'");
    }
    RunConfig c;
    get_plain(j, "command", c.command);
    get_plain(j, "spec", c.spec);
    get_list(j, "alpha", c.alpha);
    get_list(j, "gamma", c.gamma);
    get_list(j, "n", c.n);
    get_opt(j, "N", c.N);
    get_opt(j, "beta", c.beta);
    get_opt(j, "A", c.A);
    get_opt(j, "B", c.B);
    get_opt(j, "c", c.c);
    get_opt(j, "hall_a", c.hall_a);
    get_opt(j, "K0", c.K0);
    get_opt(j, "x0", c.x0);
    get_plain(j, "seed", c.seed);
    get_plain(j, "m", c.m);
    get_plain(j, "format", c.format);
    get_plain(j, "out", c.out);
    get_plain(j, "precision", c.precision);
    get_opt(j, "xmax", c.xmax);
    get_opt(j, "step", c.step);
    get_list(j, "t", c.t);
    get_plain(j, "backend", c.backend);
    get_plain(j, "estimator", c.estimator);
    get_plain(j, "method", c.method);
    get_plain(j, "floor_pairs", c.floor_pairs);
    return c;
}

double single_alpha(const RunConfig& c) {
    if (c.alpha.size() != 1) throw UsageError(c.command + ": exactly one --alpha value is required");
    return c.alpha.front();
}

DistributionSpec build_spec(const RunConfig& c) {
    const double alpha = single_alpha(c);
    if (c.spec == "pareto") return DistributionSpec::pareto(alpha);
    if (c.spec == "modified-pareto") {
        if (!c.beta) throw UsageError("modified-pareto: --beta is required");
        if (!c.A && !c.B) return DistributionSpec::modified_pareto_balanced(alpha, *c.beta);
        // A missing one of A, B is solved from A/alpha + B/beta = 1.
        const double A = c.A ? *c.A : alpha * (1.0 - *c.B / *c.beta);
        const double B = c.B ? *c.B : *c.beta * (1.0 - A / alpha);
        return DistributionSpec::modified_pareto(alpha, *c.beta, A, B);
    }
    if (c.spec == "hall") {
        if (!c.c) throw UsageError("hall: --c is required");
        const double a = c.hall_a.value_or(0.25);
        const double b = (1.0 - 2.0 * a) * (*c.c + 1.0) / 2.0;
        return DistributionSpec::hall(alpha, a, b, *c.c);
    }
    if (c.spec == "log-pareto") {
        const double beta = c.beta.value_or(0.0);
        const double x0 = c.x0.value_or(std::exp(1.0));
        const double K0 = c.K0 ? *c.K0 : std::pow(x0, alpha) / std::pow(std::log(x0), beta);
        return DistributionSpec::log_pareto(alpha, beta, K0, x0);
    }
    throw UsageError("unknown spec '" + c.spec + "' (pareto, modified-pareto, hall, log-pareto)");
}

}  // namespace stable_stein::cli
