#pragma once

#include <ostream>

namespace homkit
{

/// Command-line entry point. Returns 0 when every check passes, 1 when a
/// verification fails and 2 for malformed input.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace homkit
