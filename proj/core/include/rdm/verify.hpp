#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rdm {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  /// Pass condition is value < threshold unless stated in detail.
  double threshold = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 42;
  /// Draws per KS comparison.
  std::int64_t samples = 1'000'000;
  /// Accepted shell samples per stationarity check.
  std::int64_t shell_samples = 100'000;
  int threads = 0;
};

/// plateau, qubit-closed-forms, mc-ks, stationarity, eq14-identity, asymptotics.
const std::vector<std::string>& suite_names();

/// Unknown names raise Error(InvalidArgument).
SuiteReport run_suite(const std::string& name, const VerifyOptions& options = {});

std::string report_to_json(const SuiteReport& report);
/// One "PASS|FAIL name value threshold detail" line per check plus a summary.
std::string report_to_text(const SuiteReport& report);

}  // namespace rdm
