#include "turaco/ast.hpp"

#include <bit>
#include <cstdint>

namespace turaco {

StmtPtr seq_of(const std::vector<StmtPtr>& stmts) {
  if (stmts.empty()) return skip_stmt();
  StmtPtr acc = stmts.back();
  for (auto it = stmts.rbegin() + 1; it != stmts.rend(); ++it) acc = seq_stmt(*it, acc);
  return acc;
}

namespace {

bool bits_equal(Real a, Real b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

bool core_expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Sub:
    case ExprKind::DivConst:
      return false;
    case ExprKind::Negate:
      if (e.args[0]->kind == ExprKind::Constant) return false;
      break;
    default:
      break;
  }
  for (const auto& a : e.args)
    if (!core_expr(*a)) return false;
  return true;
}

bool core_stmt(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Skip:
    case StmtKind::VectorDecl:
      return true;
    case StmtKind::Seq:
      return core_stmt(*s.first) && core_stmt(*s.second);
    case StmtKind::Assign:
      return s.op == AssignOp::Set && core_expr(*s.expr);
    case StmtKind::If:
      return s.cmp == CmpOp::Gt && s.cond_rhs->kind == ExprKind::Constant &&
             s.cond_rhs->value == 0.0 && core_expr(*s.cond_lhs) && core_stmt(*s.then_branch) &&
             core_stmt(*s.else_branch);
  }
  return false;
}

}  // namespace

bool is_core(const Program& p) {
  if (!core_stmt(*p.body)) return false;
  for (const auto& r : p.returns)
    if (r->kind != ExprKind::Var) return false;
  return true;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name || a.index != b.index ||
      !bits_equal(a.value, b.value) || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

bool opt_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

bool opt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return equal(*a, *b);
}

}  // namespace

bool equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case StmtKind::Skip:
      return true;
    case StmtKind::Seq:
      return opt_equal(a.first, b.first) && opt_equal(a.second, b.second);
    case StmtKind::Assign:
      return a.target == b.target && a.target_index == b.target_index && a.op == b.op &&
             opt_equal(a.expr, b.expr);
    case StmtKind::If:
      return a.cmp == b.cmp && opt_equal(a.cond_lhs, b.cond_lhs) &&
             opt_equal(a.cond_rhs, b.cond_rhs) && opt_equal(a.then_branch, b.then_branch) &&
             opt_equal(a.else_branch, b.else_branch);
    case StmtKind::VectorDecl:
      return a.target == b.target && a.dim == b.dim;
  }
  return false;
}

bool equal(const Program& a, const Program& b) {
  if (a.inputs.size() != b.inputs.size() || a.returns.size() != b.returns.size()) return false;
  for (std::size_t i = 0; i < a.inputs.size(); ++i)
    if (a.inputs[i].name != b.inputs[i].name || a.inputs[i].dim != b.inputs[i].dim) return false;
  if (!opt_equal(a.body, b.body)) return false;
  for (std::size_t i = 0; i < a.returns.size(); ++i)
    if (!equal(*a.returns[i], *b.returns[i])) return false;
  return true;
}

}  // namespace turaco
