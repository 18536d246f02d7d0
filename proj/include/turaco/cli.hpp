#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace turaco {

// Entry point behind the turaco binary, kept callable so tests can drive the
// full command surface in process. args excludes the program name. Returns 0
// on success, 1 on a domain error, 2 on a usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// K log-spaced integers from lo to hi ("LO..HI:xK"), de-duplicated after
// rounding, or an explicit comma-separated list.
std::vector<long long> parse_budgets(const std::string& spec);

}  // namespace turaco
