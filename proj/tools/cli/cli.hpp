#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cev::cli {

// Runs one command line (without the program name). Returns the process exit
// code: 0 on success, 1 on invalid input, 2 when a series fails to converge.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cev::cli
