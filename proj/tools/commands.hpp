#pragma once

#include <iosfwd>

namespace honeycomb::cli {

// Exit codes: 0 success, 2 usage or parse error, 3 nothing found, 4 cap
// exceeded, 5 precision ambiguity, 6 verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace honeycomb::cli
