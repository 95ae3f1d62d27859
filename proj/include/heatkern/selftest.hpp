#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace heatkern::selftest {

enum class Level { quick, full };

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  std::vector<std::string> failures;
  bool ok() const { return failed == 0; }
};

/// Invariant suites of every module. quick runs in seconds; full adds the
/// simplex d=2 dual-path suite, oracle cross-checks and envelope scans.
std::vector<SuiteResult> run(Level level);

/// Names of the suites `run(level)` executes, in order.
std::vector<std::string> manifest(Level level);

}  // namespace heatkern::selftest
