#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace concentric::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,    // bad flags, unknown keys, unparsable values
    kDataError = 3,      // malformed or unusable input data
    kNotConverged = 4,   // fit finished without convergence
    kModelError = 5,     // physically invalid inputs (unstable geometry, no root, ...)
};

// Runs one CLI invocation. args excludes the program name. Reports go to
// `out`, diagnostics to `err`; data files go to the --out directory.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace concentric::cli
