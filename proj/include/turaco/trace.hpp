#pragma once

#include <string>
#include <vector>

#include "turaco/ast.hpp"
#include "turaco/interp.hpp"

namespace turaco {

// One syntactic path through a program: the straight-line body obtained by
// committing every `if` to a single branch, plus the label string that picks
// that combination out.
struct Trace {
  std::string path;
  StmtPtr body;
  std::vector<ExprPtr> returns;
};

// Enumerate every syntactic path of a program, in lexicographic path order
// ('l' sorts before 'r'). The program is desugared first, so traces are
// always in core form. Throws AnalysisError when the path count exceeds cap.
std::vector<Trace> collect_traces(const Program& p, std::size_t cap = 4096);

// View a trace as a stand-alone straight-line program over the same inputs.
Program trace_program(const Program& p, const Trace& t);

// Execute one trace on the given arguments. Branch conditions are gone, so
// this runs the committed branches whether or not the inputs select them.
std::vector<Real> run_trace(const Program& p, const Trace& t, const std::vector<Value>& args);

}  // namespace turaco
