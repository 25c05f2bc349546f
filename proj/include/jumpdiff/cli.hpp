#pragma once

#include <iosfwd>

namespace jumpdiff {

//! Entry point of the `jumpdiff` tool. Returns 0 on success, 1 on invalid
//! input and 2 on runtime failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jumpdiff
