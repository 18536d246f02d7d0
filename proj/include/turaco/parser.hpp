#pragma once

#include <string>

#include "turaco/ast.hpp"

namespace turaco {

// Parse a surface program. Throws ParseError with line/column on failure.
Program parse(const std::string& source);

// Load and parse a .turaco file.
Program parse_file(const std::string& path);

}  // namespace turaco
