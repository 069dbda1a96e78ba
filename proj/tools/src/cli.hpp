#pragma once

#include <iosfwd>

namespace holo::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kParseError = 2,
    kValidationError = 3,
    kInsufficientData = 4,
    kResidualFailure = 5,
};

// Entry point of the holoscope tool; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace holo::cli
