#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dvsb {

// Entry point of the `dvsb` tool. `args` excludes the program name.
// Returns 0 on success, 2 for usage or input errors, 3 for configuration
// errors and 1 for anything unexpected.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dvsb
