#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cone/harness.hpp"

namespace cone {

enum ExitCode : int { kExitPass = 0, kExitCompareFail = 1, kExitInput = 2, kExitAccuracy = 3 };

/// Minimal TOML subset for grid files: `key = value` lines, numbers, bools,
/// quoted strings and flat arrays of numbers; `#` starts a comment.
GridSpec parse_grid_toml(const std::string& text);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cone
