#pragma once

#include <ostream>

namespace tccm::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kConfig = 2,
    kData = 3,
    kNumerical = 4,
};

// Parses argv and runs one subcommand. Diagnostics go to `err` as a single
// "error: ..." line (followed by usage text for flag errors).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tccm::cli
