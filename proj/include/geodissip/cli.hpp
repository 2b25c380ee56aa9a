#pragma once

#include <map>
#include <string>
#include <vector>

#include "geodissip/integrate.hpp"

namespace geodissip::cli {

/// Exit codes: 0 success, 1 verification failure, 2 configuration error,
/// 3 runtime integration failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeFailure = 3;

int run_cli(int argc, const char* const* argv);

/// Resolved simulation setup built from a config document.
struct SimulationSetup {
  FlowSpec spec;
  int stride = 1;
  std::string format = "csv";
  std::string resolved_echo;  // effective configuration, echoed to stderr
};

/// Parses and validates a simulate config JSON document.
/// Throws ConfigError with a message naming the offending field.
SimulationSetup parse_simulation_config(const std::string& json_text);

std::vector<std::string> registered_model_names();

}  // namespace geodissip::cli
