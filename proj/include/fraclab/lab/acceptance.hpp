#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace fraclab::lab {

struct CriterionResult {
  std::string id;
  bool pass = false;
  bool blocking = true;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> criterion_ids();

// Runs the selected criteria (all when `only` is empty), printing one
// PASS/FAIL line per criterion to log as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, std::ostream& log);

nlohmann::json summary_json(const std::vector<CriterionResult>& results);

}  // namespace fraclab::lab
