#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stable_stein/distribution.hpp"

namespace stable_stein::cli {

// Every input of a run. Unset optionals fall back to per-command defaults.
struct RunConfig {
    std::string command;
    std::string spec = "pareto";
    std::vector<double> alpha;
    std::vector<double> gamma;
    std::vector<double> n;
    std::optional<double> N;  // +inf when unset
    std::optional<double> beta;
    std::optional<double> A;
    std::optional<double> B;
    std::optional<double> c;
    std::optional<double> hall_a;
    std::optional<double> K0;
    std::optional<double> x0;
    std::uint64_t seed = 42;
    std::uint64_t m = 100000;
    std::string format;  // csv or json; empty picks the command default
    std::string out;
    std::string precision = "double";
    std::optional<double> xmax;
    std::optional<double> step;
    std::vector<double> t;
    std::string backend = "closed_form";
    std::string estimator = "bias_corrected";
    std::string method = "main";
    unsigned floor_pairs = 8;
};

nlohmann::json to_json(const RunConfig& c);
// Unknown keys are a usage error.
RunConfig from_json(const nlohmann::json& j);

double single_alpha(const RunConfig& c);
DistributionSpec build_spec(const RunConfig& c);

}  // namespace stable_stein::cli
