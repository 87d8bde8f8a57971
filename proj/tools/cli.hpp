// cli.hpp: command-line front end.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration or domain error,
// 3 numerical tolerance failure or failed identity check, 4 pole-scan failure.

#pragma once

#include <iosfwd>

namespace oscbath::cli {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace oscbath::cli
