#include "turaco/pretty.hpp"

#include <charconv>
#include <sstream>

namespace turaco {

std::string format_real(Real v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

namespace {

// Precedence levels: additive 1, multiplicative 2, unary 3, postfix 4, atom 5.
int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::DivConst:
      return 2;
    case ExprKind::Negate:
      return 3;
    case ExprKind::Index:
      return 4;
    default:
      return 5;
  }
}

void print_expr(std::ostream& os, const Expr& e, int parent) {
  bool parens = prec(e) < parent;
  if (parens) os << '(';
  switch (e.kind) {
    case ExprKind::Constant:
      os << format_real(e.value);
      break;
    case ExprKind::Var:
      os << e.name;
      break;
    case ExprKind::Negate:
      os << '-';
      print_expr(os, *e.args[0], 3);
      break;
    case ExprKind::Add:
      print_expr(os, *e.args[0], 1);
      os << " + ";
      print_expr(os, *e.args[1], 2);
      break;
    case ExprKind::Sub:
      print_expr(os, *e.args[0], 1);
      os << " - ";
      print_expr(os, *e.args[1], 2);
      break;
    case ExprKind::Mul:
      print_expr(os, *e.args[0], 2);
      os << " * ";
      print_expr(os, *e.args[1], 3);
      break;
    case ExprKind::DivConst:
      print_expr(os, *e.args[0], 2);
      os << " / " << format_real(e.value);
      break;
    case ExprKind::Sin:
      os << "sin(";
      print_expr(os, *e.args[0], 0);
      os << ')';
      break;
    case ExprKind::Cos:
      os << "cos(";
      print_expr(os, *e.args[0], 0);
      os << ')';
      break;
    case ExprKind::Exp:
      os << "exp(";
      print_expr(os, *e.args[0], 0);
      os << ')';
      break;
    case ExprKind::Log:
      os << "log{" << format_real(e.value) << "}(";
      print_expr(os, *e.args[0], 0);
      os << ')';
      break;
    case ExprKind::VectorLit:
      os << '[';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.args[i], 0);
      }
      os << ']';
      break;
    case ExprKind::Index:
      print_expr(os, *e.args[0], 4);
      os << '[' << e.index << ']';
      break;
  }
  if (parens) os << ')';
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << ' ';
}

const char* assign_op(AssignOp op) {
  switch (op) {
    case AssignOp::Set: return "=";
    case AssignOp::AddEq: return "+=";
    case AssignOp::SubEq: return "-=";
    case AssignOp::MulEq: return "*=";
    case AssignOp::DivEq: return "/=";
  }
  return "=";
}

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
  switch (s.kind) {
    case StmtKind::Seq:
      print_stmt(os, *s.first, depth);
      print_stmt(os, *s.second, depth);
      break;
    case StmtKind::Skip:
      indent(os, depth);
      os << "skip;\n";
      break;
    case StmtKind::Assign:
      indent(os, depth);
      os << s.target;
      if (s.target_index >= 0) os << '[' << s.target_index << ']';
      os << ' ' << assign_op(s.op) << ' ';
      print_expr(os, *s.expr, 0);
      os << ";\n";
      break;
    case StmtKind::VectorDecl:
      indent(os, depth);
      os << s.target << '[' << s.dim << "];\n";
      break;
    case StmtKind::If:
      indent(os, depth);
      os << "if (";
      print_expr(os, *s.cond_lhs, 0);
      os << (s.cmp == CmpOp::Lt ? " < " : " > ");
      print_expr(os, *s.cond_rhs, 0);
      os << ") {\n";
      print_stmt(os, *s.then_branch, depth + 1);
      indent(os, depth);
      os << "} else {\n";
      print_stmt(os, *s.else_branch, depth + 1);
      indent(os, depth);
      os << "}\n";
      break;
  }
}

}  // namespace

std::string pretty_print(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, 0);
  return os.str();
}

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "fun (";
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (i) os << ", ";
    os << p.inputs[i].name;
    if (p.inputs[i].dim > 0) os << '[' << p.inputs[i].dim << ']';
  }
  os << ") {\n";
  print_stmt(os, *p.body, 1);
  os << " return ";
  for (std::size_t i = 0; i < p.returns.size(); ++i) {
    if (i) os << ", ";
    print_expr(os, *p.returns[i], 0);
  }
  os << "\n}\n";
  return os.str();
}

}  // namespace turaco
