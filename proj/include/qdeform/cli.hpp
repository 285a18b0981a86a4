#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qdeform::cli {

/// Runs one command line (without the program name). Returns 0 when every
/// check passes, 1 on a failed check or computation error, 2 on usage and
/// parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qdeform::cli
