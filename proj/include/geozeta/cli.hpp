#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geozeta {

// Full command-line surface as a library call: args excludes the program
// name; artifacts and summaries go to `out` (or files named by flags),
// machine-readable error JSON goes to `err`.  Returns the process exit code:
// 0 success, 2 validation, 3 convergence precondition, 4 numeric failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace geozeta
