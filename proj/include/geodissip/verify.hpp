#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace geodissip::verify {

struct PropertyResult {
  std::string name;
  long instances = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string suite;
  std::vector<PropertyResult> properties;
  bool all_pass() const;
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  int count = 100;
  /// Tolerance overrides by property name; "all" applies everywhere.
  std::map<std::string, double> tolerance_overrides;
};

/// Suites in canonical order (excluding the "all" alias).
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

SuiteReport run_suite(const std::string& name, const VerifyConfig& config);
std::vector<SuiteReport> run(const std::string& selection,
                             const VerifyConfig& config);

/// Deterministic JSON report: same config, byte-identical output.
std::string report_json(const std::vector<SuiteReport>& reports,
                        const VerifyConfig& config);
std::string report_text(const std::vector<SuiteReport>& reports);

}  // namespace geodissip::verify
