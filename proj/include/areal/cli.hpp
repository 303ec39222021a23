#pragma once

#include <iosfwd>

namespace areal::cli {

/// Runs the command line. Exit codes: 0 success, 1 validation or usage
/// error, 2 unresolved items in strict mode.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace areal::cli
