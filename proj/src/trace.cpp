#include "turaco/trace.hpp"

#include "turaco/desugar.hpp"
#include "turaco/error.hpp"

namespace turaco {
namespace {

struct PathStmt {
  std::string path;
  StmtPtr body;
};

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap)
    throw AnalysisError("path explosion: program has more than " + std::to_string(cap) +
                        " syntactic paths");
}

std::vector<PathStmt> walk(const StmtPtr& s, std::size_t cap) {
  switch (s->kind) {
    case StmtKind::Skip:
    case StmtKind::Assign:
    case StmtKind::VectorDecl:
      return {{"", s}};
    case StmtKind::Seq: {
      auto left = walk(s->first, cap);
      auto right = walk(s->second, cap);
      check_cap(left.size() * right.size(), cap);
      std::vector<PathStmt> out;
      out.reserve(left.size() * right.size());
      for (const auto& a : left)
        for (const auto& b : right) out.push_back({a.path + b.path, seq_stmt(a.body, b.body)});
      return out;
    }
    case StmtKind::If: {
      auto then_side = walk(s->then_branch, cap);
      auto else_side = walk(s->else_branch, cap);
      check_cap(then_side.size() + else_side.size(), cap);
      std::vector<PathStmt> out;
      out.reserve(then_side.size() + else_side.size());
      for (auto& a : then_side) out.push_back({"l" + a.path, std::move(a.body)});
      for (auto& b : else_side) out.push_back({"r" + b.path, std::move(b.body)});
      return out;
    }
  }
  throw AnalysisError("unreachable statement kind");
}

}  // namespace

std::vector<Trace> collect_traces(const Program& p, std::size_t cap) {
  Program core = desugar(p);
  auto stmts = walk(core.body, cap);
  std::vector<Trace> out;
  out.reserve(stmts.size());
  for (auto& ps : stmts) out.push_back({std::move(ps.path), std::move(ps.body), core.returns});
  return out;
}

Program trace_program(const Program& p, const Trace& t) {
  Program q;
  q.inputs = p.inputs;
  q.body = t.body;
  q.returns = t.returns;
  return q;
}

std::vector<Real> run_trace(const Program& p, const Trace& t, const std::vector<Value>& args) {
  return run(trace_program(p, t), args).outputs;
}

}  // namespace turaco
