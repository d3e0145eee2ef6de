#pragma once

#include <ostream>

namespace sph2::cli {

/// Parses argv and runs one subcommand. Returns the process exit code:
/// 0 on success, 2 on input/validation errors, 3 on numerical failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sph2::cli
