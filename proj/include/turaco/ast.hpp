#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace turaco {

using Real = double;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Surface expressions include Sub and DivConst; desugaring removes both.
enum class ExprKind {
  Constant,
  Var,
  Negate,
  Add,
  Sub,       // surface only
  Mul,
  DivConst,  // surface only: e / c with a literal constant divisor
  Sin,
  Cos,
  Exp,
  Log,       // log{base}(e)
  VectorLit,
  Index,     // e[k] with a literal integer index
};

struct Expr {
  ExprKind kind;
  Real value = 0.0;          // Constant payload; DivConst divisor; Log base
  std::string name;          // Var
  int index = -1;            // Index position
  std::vector<ExprPtr> args;
};

inline ExprPtr make_expr(ExprKind kind, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->args = std::move(args);
  return e;
}

inline ExprPtr constant(Real v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Constant;
  e->value = v;
  return e;
}

inline ExprPtr var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = std::move(name);
  return e;
}

inline ExprPtr negate(ExprPtr a) { return make_expr(ExprKind::Negate, {std::move(a)}); }
inline ExprPtr add(ExprPtr a, ExprPtr b) { return make_expr(ExprKind::Add, {std::move(a), std::move(b)}); }
inline ExprPtr sub(ExprPtr a, ExprPtr b) { return make_expr(ExprKind::Sub, {std::move(a), std::move(b)}); }
inline ExprPtr mul(ExprPtr a, ExprPtr b) { return make_expr(ExprKind::Mul, {std::move(a), std::move(b)}); }

inline ExprPtr div_const(ExprPtr a, Real c) {
  auto e = make_expr(ExprKind::DivConst, {std::move(a)});
  const_cast<Expr&>(*e).value = c;
  return e;
}

inline ExprPtr sin_of(ExprPtr a) { return make_expr(ExprKind::Sin, {std::move(a)}); }
inline ExprPtr cos_of(ExprPtr a) { return make_expr(ExprKind::Cos, {std::move(a)}); }
inline ExprPtr exp_of(ExprPtr a) { return make_expr(ExprKind::Exp, {std::move(a)}); }

inline ExprPtr log_of(Real base, ExprPtr a) {
  auto e = make_expr(ExprKind::Log, {std::move(a)});
  const_cast<Expr&>(*e).value = base;
  return e;
}

inline ExprPtr vector_lit(std::vector<ExprPtr> elems) {
  return make_expr(ExprKind::VectorLit, std::move(elems));
}

inline ExprPtr index_of(ExprPtr base, int k) {
  auto e = make_expr(ExprKind::Index, {std::move(base)});
  const_cast<Expr&>(*e).index = k;
  return e;
}

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class StmtKind { Skip, Seq, Assign, If, VectorDecl };

// Compound assignment operators are surface sugar; core uses Set only.
enum class AssignOp { Set, AddEq, SubEq, MulEq, DivEq };

// Comparison in an if condition. Core form is canonical: cmp == Gt with
// rhs == Constant(0), read as "expr > 0".
enum class CmpOp { Lt, Gt };

struct Stmt {
  StmtKind kind;

  // Seq (right-associated)
  StmtPtr first, second;

  // Assign / VectorDecl target
  std::string target;
  int target_index = -1;  // >= 0 for indexed assignment
  AssignOp op = AssignOp::Set;
  ExprPtr expr;

  // If
  ExprPtr cond_lhs, cond_rhs;
  CmpOp cmp = CmpOp::Gt;
  StmtPtr then_branch, else_branch;

  // VectorDecl
  int dim = 0;
};

inline StmtPtr skip_stmt() {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Skip;
  return s;
}

inline StmtPtr seq_stmt(StmtPtr a, StmtPtr b) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Seq;
  s->first = std::move(a);
  s->second = std::move(b);
  return s;
}

inline StmtPtr assign_stmt(std::string target, ExprPtr e, AssignOp op = AssignOp::Set,
                           int target_index = -1) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::Assign;
  s->target = std::move(target);
  s->target_index = target_index;
  s->op = op;
  s->expr = std::move(e);
  return s;
}

inline StmtPtr if_stmt(ExprPtr lhs, CmpOp cmp, ExprPtr rhs, StmtPtr then_b, StmtPtr else_b) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::If;
  s->cond_lhs = std::move(lhs);
  s->cmp = cmp;
  s->cond_rhs = std::move(rhs);
  s->then_branch = std::move(then_b);
  s->else_branch = std::move(else_b);
  return s;
}

inline StmtPtr vector_decl_stmt(std::string name, int dim) {
  auto s = std::make_shared<Stmt>();
  s->kind = StmtKind::VectorDecl;
  s->target = std::move(name);
  s->dim = dim;
  return s;
}

// Fold a statement list into a right-associated Seq chain (empty list => Skip).
StmtPtr seq_of(const std::vector<StmtPtr>& stmts);

struct Param {
  std::string name;
  int dim = 0;  // 0 => scalar input, k >= 1 => vector input of length k
};

struct Program {
  std::vector<Param> inputs;
  StmtPtr body;
  std::vector<ExprPtr> returns;
};

// True if the program is in core form: no Sub/DivConst nodes, no compound
// assignments, no Negate around a Constant, canonical "e > 0" conditions, and
// all returns plain variable references.
bool is_core(const Program& p);

// Structural equality (names, kinds, numeric payloads compared bitwise).
bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const Program& a, const Program& b);

}  // namespace turaco
