#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace stable_stein::cli {

const std::vector<std::string>& command_names();

// Runs one command. Machine output goes to `out`, progress to `err`.
// Throws UsageError, DomainError or ConvergenceError.
void run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace stable_stein::cli
