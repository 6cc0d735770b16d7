#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace invperc::verify {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;  // first counterexample or the measured value
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> suite_names();

// Runs one named suite (or "all"). scale multiplies the default workload
// sizes; 1 is the quick CLI setting.
std::vector<SuiteResult> run_suites(const std::string& name, int scale = 1);

}  // namespace invperc::verify
