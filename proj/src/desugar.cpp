#include "turaco/desugar.hpp"

#include <unordered_set>

#include "turaco/error.hpp"

namespace turaco {
namespace {

// Negation that folds literals, so no Negate(Constant) survives.
ExprPtr mk_neg(ExprPtr e) {
  if (e->kind == ExprKind::Constant) return constant(-e->value);
  return negate(std::move(e));
}

ExprPtr ds_expr(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Constant:
    case ExprKind::Var:
      return e;
    case ExprKind::Negate:
      return mk_neg(ds_expr(e->args[0]));
    case ExprKind::Add:
      return add(ds_expr(e->args[0]), ds_expr(e->args[1]));
    case ExprKind::Sub:
      return add(ds_expr(e->args[0]), mk_neg(ds_expr(e->args[1])));
    case ExprKind::Mul:
      return mul(ds_expr(e->args[0]), ds_expr(e->args[1]));
    case ExprKind::DivConst:
      return mul(ds_expr(e->args[0]), constant(1.0 / e->value));
    case ExprKind::Sin:
      return sin_of(ds_expr(e->args[0]));
    case ExprKind::Cos:
      return cos_of(ds_expr(e->args[0]));
    case ExprKind::Exp:
      return exp_of(ds_expr(e->args[0]));
    case ExprKind::Log:
      return log_of(e->value, ds_expr(e->args[0]));
    case ExprKind::VectorLit: {
      std::vector<ExprPtr> elems;
      elems.reserve(e->args.size());
      for (const auto& a : e->args) elems.push_back(ds_expr(a));
      return vector_lit(std::move(elems));
    }
    case ExprKind::Index:
      return index_of(ds_expr(e->args[0]), e->index);
  }
  throw Error("unreachable expression kind");
}

bool is_zero_literal(const Expr& e) { return e.kind == ExprKind::Constant && e.value == 0.0; }

// x - y as a condition operand, dropping literal-zero sides.
ExprPtr cond_diff(ExprPtr x, ExprPtr y) {
  if (is_zero_literal(*y)) return x;
  if (is_zero_literal(*x)) return mk_neg(std::move(y));
  return add(std::move(x), mk_neg(std::move(y)));
}

ExprPtr target_ref(const Stmt& s) {
  ExprPtr t = var(s.target);
  if (s.target_index >= 0) t = index_of(std::move(t), s.target_index);
  return t;
}

StmtPtr ds_stmt(const StmtPtr& s) {
  switch (s->kind) {
    case StmtKind::Skip:
    case StmtKind::VectorDecl:
      return s;
    case StmtKind::Seq:
      return seq_stmt(ds_stmt(s->first), ds_stmt(s->second));
    case StmtKind::Assign: {
      ExprPtr rhs = ds_expr(s->expr);
      switch (s->op) {
        case AssignOp::Set:
          break;
        case AssignOp::AddEq:
          rhs = add(target_ref(*s), std::move(rhs));
          break;
        case AssignOp::SubEq:
          rhs = add(target_ref(*s), mk_neg(std::move(rhs)));
          break;
        case AssignOp::MulEq:
          rhs = mul(target_ref(*s), std::move(rhs));
          break;
        case AssignOp::DivEq: {
          // The parser guarantees a literal divisor; after ds_expr it is a
          // (possibly negative) constant.
          if (rhs->kind != ExprKind::Constant || rhs->value == 0.0)
            throw Error("'/=' requires a nonzero literal constant divisor");
          rhs = mul(target_ref(*s), constant(1.0 / rhs->value));
          break;
        }
      }
      return assign_stmt(s->target, std::move(rhs), AssignOp::Set, s->target_index);
    }
    case StmtKind::If: {
      ExprPtr lhs = ds_expr(s->cond_lhs);
      ExprPtr rhs = ds_expr(s->cond_rhs);
      ExprPtr cond = s->cmp == CmpOp::Lt ? cond_diff(std::move(rhs), std::move(lhs))
                                         : cond_diff(std::move(lhs), std::move(rhs));
      return if_stmt(std::move(cond), CmpOp::Gt, constant(0.0), ds_stmt(s->then_branch),
                     ds_stmt(s->else_branch));
    }
  }
  throw Error("unreachable statement kind");
}

void collect_names(const Expr& e, std::unordered_set<std::string>& names) {
  if (e.kind == ExprKind::Var) names.insert(e.name);
  for (const auto& a : e.args) collect_names(*a, names);
}

void collect_names(const Stmt& s, std::unordered_set<std::string>& names) {
  if (!s.target.empty()) names.insert(s.target);
  for (const ExprPtr& e : {s.expr, s.cond_lhs, s.cond_rhs})
    if (e) collect_names(*e, names);
  for (const StmtPtr& c : {s.first, s.second, s.then_branch, s.else_branch})
    if (c) collect_names(*c, names);
}

// Splice onto the right spine so the chain stays right-associated, the shape
// the parser builds; a plain seq_stmt around a Seq body would not re-parse to
// an equal tree.
StmtPtr append_stmts(StmtPtr body, StmtPtr tail) {
  if (body->kind == StmtKind::Seq)
    return seq_stmt(body->first, append_stmts(body->second, std::move(tail)));
  return seq_stmt(std::move(body), std::move(tail));
}

}  // namespace

Program desugar(const Program& p) {
  Program out;
  out.inputs = p.inputs;
  out.body = ds_stmt(p.body);

  std::unordered_set<std::string> used;
  for (const auto& in : p.inputs) used.insert(in.name);
  collect_names(*p.body, used);
  for (const auto& r : p.returns) collect_names(*r, used);

  std::vector<StmtPtr> extra;
  int fresh = 0;
  for (const auto& r : p.returns) {
    if (r->kind == ExprKind::Var) {
      out.returns.push_back(r);
      continue;
    }
    std::string name;
    do {
      name = "_out" + std::to_string(fresh++);
    } while (used.count(name));
    used.insert(name);
    extra.push_back(assign_stmt(name, ds_expr(r)));
    out.returns.push_back(var(name));
  }
  if (!extra.empty()) out.body = append_stmts(std::move(out.body), seq_of(extra));
  return out;
}

}  // namespace turaco
