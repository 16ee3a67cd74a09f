#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "walshflow/config.hpp"

namespace walshflow {

// One measured quantity of a criterion against its threshold.
struct CheckItem {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // value relation threshold: "==", "<=", "<" or ">="
  bool passed = false;
};

struct CheckResult {
  int id = 0;
  std::string name;
  std::vector<CheckItem> items;
  nlohmann::json details = nlohmann::json::object();
  std::map<std::string, std::string> artifacts;  // file name -> content
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool within_budget() const { return seconds < budget_seconds; }
  bool passed() const;  // every item and the runtime budget
};

CheckResult check_cv_bound(const Config& c);          // 1
CheckResult check_cv_structure(const Config& c);      // 2
CheckResult check_flip(const Config& c);              // 3
CheckResult check_flow_exactness(const Config& c);    // 4
CheckResult check_donsker(const Config& c);           // 5
CheckResult check_beta_metric(const Config& c);       // 6
CheckResult check_convergence(const Config& c);       // 7

// Runs criterion `id` (1..7) and times it.
CheckResult run_check(int id, const Config& c);

// Items only: the JSON is a pure function of the config.
nlohmann::json to_json(const CheckResult& r);

// One line "[PASS] 3 name (1.2 s)".
std::string summary_line(const CheckResult& r);

}  // namespace walshflow
