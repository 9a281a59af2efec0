#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quiverforge {

/// CLI dispatch, separated from main() so tests can drive it directly.
/// Exit codes: 0 success, 1 malformed JSON (diagnostic object on stdout),
/// 2 precondition error, 3 numerical non-convergence.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace quiverforge
