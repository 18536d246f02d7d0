#pragma once

#include "turaco/ast.hpp"

namespace turaco {

// Lower a surface program to core form:
//   a - b            =>  a + -b
//   e / c            =>  e * (1/c)
//   x op= e          =>  x = x op e
//   if (a < b)       =>  if (b + -a > 0)     (then-branch unchanged)
//   if (a > b)       =>  if (a + -b > 0)
//   -literal         =>  negative constant
//   return <expr>    =>  fresh variable assignment + return of that variable
// Comparisons against a literal 0 keep the bare operand as the condition.
// Idempotent: desugaring a core program returns it structurally unchanged.
Program desugar(const Program& p);

}  // namespace turaco
