#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "turaco/ast.hpp"
#include "turaco/trace.hpp"

namespace turaco {

// Abstract value tracked by the analysis: t bounds the magnitude of the
// concrete value over the unit input box, d bounds the summed magnitudes of
// its partial derivatives with respect to the inputs. Both are bounds for the
// analytic continuation on a disk, which is why sin/cos pick up hyperbolic
// envelopes.
struct DualBound {
  Real t = 0;
  Real d = 0;
};

// Scalar bound or per-component bounds for a declared vector.
struct TildeValue {
  bool is_vec = false;
  std::vector<DualBound> comps;  // exactly one entry when scalar
};

using TildeEnv = std::unordered_map<std::string, TildeValue>;

// Abstract transfer for a core expression. Throws AnalysisError on surface
// constructs and when a log argument's bound reaches the divergence radius
// (the error suggests the log(x) = log(x/c) + log(c) rewrite).
TildeValue tilde_expr(const TildeEnv& env, const Expr& e);

// Sample complexity of one straight-line trace: run the abstract semantics
// with every input component at (1, 1), sum the derivative bounds over all
// flattened outputs, and square the sum.
Real trace_complexity(const Program& p, const Trace& t);

struct PathComplexity {
  std::string path;
  Real zeta = 0;
};

// Complexity of every syntactic path, in lexicographic path order.
std::vector<PathComplexity> program_complexities(const Program& p, std::size_t cap = 4096);

}  // namespace turaco
