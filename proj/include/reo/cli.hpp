#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace reo::cli {

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
/// Returns 0 on success, 1 on data errors, 2 on configuration errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reo::cli
