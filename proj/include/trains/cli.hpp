#pragma once

#include <string>
#include <vector>

namespace trains {

/// Runs one CLI command. Exit codes: 0 success; 1 when a verify run finds
/// violations or (with --fail-on-not-hyperbolic) a classification comes back
/// not-hyperbolic; 2 on input errors.
int dispatch(const std::vector<std::string>& args);

}  // namespace trains
