#pragma once

#include <iosfwd>
#include <string>

#include "fraclab/lab/config.hpp"

namespace fraclab::lab {

constexpr const char* kCodeVersion = "0.1.0";

// Dispatches on c.experiment. Returns the process exit status: 0 success,
// 2 invalid input, 3 numerical failure. Diagnostics go to err.
int run(const ExperimentConfig& c, std::ostream& out, std::ostream& err);

}  // namespace fraclab::lab
