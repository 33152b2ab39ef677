#pragma once

#include <iosfwd>

namespace ginibre {

// Exit codes: 0 success, 2 validation or usage error, 3 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ginibre
