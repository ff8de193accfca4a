#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sic::cli {

// Exit codes: 0 success, 1 usage error, 2 input/format error, 3 solver
// non-convergence. Diagnostics go to err; data goes to files or out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sic::cli
