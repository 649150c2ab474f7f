#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace snmine::cli {

/// Runs the command line `args` (args[0] is the program name). Returns the
/// process exit status: 0 on success, 1 on a runtime error, 2 on a usage
/// error. Diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snmine::cli
