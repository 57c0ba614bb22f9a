#pragma once

#include <string>
#include <vector>

namespace thom {

/// Entry point of the `thomjiggle` tool; args[0] is the program name.
/// Returns 0 on pass, 2 on a verified failure and 1 on errors.
int run_cli(const std::vector<std::string>& args);

}  // namespace thom
