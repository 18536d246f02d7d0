#pragma once

#include <string>

#include "turaco/ast.hpp"

namespace turaco {

// Render a program back to concrete syntax. Surface sugar (subtraction,
// division, compound assignments, two-sided comparisons) prints as written;
// core programs print canonically ("e > 0" conditions, "a + -b" sums).
// Numbers print in shortest round-trip form. Output re-parses to a
// structurally equal program.
std::string pretty_print(const Program& p);
std::string pretty_print(const Expr& e);

// Shortest decimal representation that round-trips through parsing.
std::string format_real(Real v);

}  // namespace turaco
