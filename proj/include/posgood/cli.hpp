#pragma once

#include <iosfwd>

namespace posgood {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_parse = 2, exit_inapplicable = 3, exit_verify = 4 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace posgood
