#include "turaco/interp.hpp"

#include <cmath>
#include <functional>

#include "turaco/error.hpp"
#include "turaco/pretty.hpp"

namespace turaco {
namespace {

Value map1(const Value& a, const std::function<Real(Real)>& f) {
  if (!a.is_vector()) return Value::num(f(a.scalar));
  std::vector<Real> out(a.v->size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f((*a.v)[i]);
  return Value::vec(std::move(out));
}

Value map2(const Value& a, const Value& b, const std::function<Real(Real, Real)>& f) {
  if (!a.is_vector() && !b.is_vector()) return Value::num(f(a.scalar, b.scalar));
  if (a.is_vector() && b.is_vector()) {
    if (a.v->size() != b.v->size())
      throw EvalError("vector length mismatch: " + std::to_string(a.v->size()) + " vs " +
                      std::to_string(b.v->size()));
    std::vector<Real> out(a.v->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f((*a.v)[i], (*b.v)[i]);
    return Value::vec(std::move(out));
  }
  const Value& vec = a.is_vector() ? a : b;
  Real s = a.is_vector() ? b.scalar : a.scalar;
  std::vector<Real> out(vec.v->size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a.is_vector() ? f((*vec.v)[i], s) : f(s, (*vec.v)[i]);
  return Value::vec(std::move(out));
}

Real log_checked(Real base, Real v) {
  if (!(std::abs(base - v) < base))
    throw EvalError("log{" + format_real(base) + "} outside domain: argument " + format_real(v) +
                    " does not satisfy |" + format_real(base) + " - v| < " + format_real(base));
  return std::log(v);
}

struct Interp {
  Store store;
  std::string path;

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Constant:
        return Value::num(e.value);
      case ExprKind::Var: {
        auto it = store.find(e.name);
        if (it == store.end()) throw EvalError("undefined variable '" + e.name + "'");
        return it->second;
      }
      case ExprKind::Negate:
        return map1(eval(*e.args[0]), [](Real v) { return -v; });
      case ExprKind::Add:
        return map2(eval(*e.args[0]), eval(*e.args[1]), [](Real a, Real b) { return a + b; });
      case ExprKind::Sub:
        return map2(eval(*e.args[0]), eval(*e.args[1]), [](Real a, Real b) { return a - b; });
      case ExprKind::Mul:
        return map2(eval(*e.args[0]), eval(*e.args[1]), [](Real a, Real b) { return a * b; });
      case ExprKind::DivConst: {
        // Division is sugar for multiplying by the reciprocal, so evaluate it
        // that way here too; the surface and core forms then agree bit for bit.
        Real inv = 1.0 / e.value;
        return map1(eval(*e.args[0]), [inv](Real v) { return v * inv; });
      }
      case ExprKind::Sin:
        return map1(eval(*e.args[0]), [](Real v) { return std::sin(v); });
      case ExprKind::Cos:
        return map1(eval(*e.args[0]), [](Real v) { return std::cos(v); });
      case ExprKind::Exp:
        return map1(eval(*e.args[0]), [](Real v) { return std::exp(v); });
      case ExprKind::Log: {
        Real b = e.value;
        return map1(eval(*e.args[0]), [b](Real v) { return log_checked(b, v); });
      }
      case ExprKind::VectorLit: {
        std::vector<Real> comps;
        comps.reserve(e.args.size());
        for (const auto& a : e.args) {
          Value v = eval(*a);
          if (v.is_vector()) throw EvalError("vector literal elements must be scalars");
          comps.push_back(v.scalar);
        }
        return Value::vec(std::move(comps));
      }
      case ExprKind::Index: {
        Value base = eval(*e.args[0]);
        if (!base.is_vector()) throw EvalError("indexing a scalar value");
        if (e.index < 0 || static_cast<std::size_t>(e.index) >= base.v->size())
          throw EvalError("index " + std::to_string(e.index) + " out of range for length " +
                          std::to_string(base.v->size()));
        return Value::num((*base.v)[e.index]);
      }
    }
    throw EvalError("unreachable expression kind");
  }

  Real eval_scalar(const Expr& e, const char* what) {
    Value v = eval(e);
    if (v.is_vector()) throw EvalError(std::string(what) + " must be a scalar");
    return v.scalar;
  }

  void assign(const Stmt& s, Value v) {
    if (s.target_index < 0) {
      store[s.target] = std::move(v);
      return;
    }
    auto it = store.find(s.target);
    if (it == store.end()) throw EvalError("undefined variable '" + s.target + "'");
    if (!it->second.is_vector()) throw EvalError("indexed assignment to scalar '" + s.target + "'");
    if (static_cast<std::size_t>(s.target_index) >= it->second.v->size())
      throw EvalError("index " + std::to_string(s.target_index) + " out of range for '" +
                      s.target + "'");
    if (v.is_vector()) throw EvalError("assigning a vector to a vector component");
    std::vector<Real> copy = *it->second.v;
    copy[s.target_index] = v.scalar;
    it->second = Value::vec(std::move(copy));
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Skip:
        return;
      case StmtKind::Seq:
        exec(*s.first);
        exec(*s.second);
        return;
      case StmtKind::VectorDecl:
        store[s.target] = Value::vec(std::vector<Real>(s.dim, 0.0));
        return;
      case StmtKind::Assign: {
        Value rhs = eval(*s.expr);
        switch (s.op) {
          case AssignOp::Set:
            break;
          case AssignOp::AddEq:
            rhs = map2(current_target(s), rhs, [](Real a, Real b) { return a + b; });
            break;
          case AssignOp::SubEq:
            rhs = map2(current_target(s), rhs, [](Real a, Real b) { return a - b; });
            break;
          case AssignOp::MulEq:
            rhs = map2(current_target(s), rhs, [](Real a, Real b) { return a * b; });
            break;
          case AssignOp::DivEq: {
            if (rhs.is_vector() || rhs.scalar == 0.0)
              throw EvalError("'/=' requires a nonzero scalar constant");
            Real inv = 1.0 / rhs.scalar;
            rhs = map1(current_target(s), [inv](Real v) { return v * inv; });
            break;
          }
        }
        assign(s, std::move(rhs));
        return;
      }
      case StmtKind::If: {
        Real lhs = eval_scalar(*s.cond_lhs, "condition");
        Real rhs = eval_scalar(*s.cond_rhs, "condition");
        bool taken = s.cmp == CmpOp::Lt ? lhs < rhs : lhs > rhs;
        path.push_back(taken ? 'l' : 'r');
        exec(taken ? *s.then_branch : *s.else_branch);
        return;
      }
    }
    throw EvalError("unreachable statement kind");
  }

  Value current_target(const Stmt& s) {
    auto it = store.find(s.target);
    if (it == store.end()) throw EvalError("undefined variable '" + s.target + "'");
    if (s.target_index < 0) return it->second;
    if (!it->second.is_vector()) throw EvalError("indexing a scalar value");
    if (static_cast<std::size_t>(s.target_index) >= it->second.v->size())
      throw EvalError("index " + std::to_string(s.target_index) + " out of range for '" +
                      s.target + "'");
    return Value::num((*it->second.v)[s.target_index]);
  }
};

void check_args(const Program& p, const std::vector<Value>& args) {
  if (args.size() != p.inputs.size())
    throw EvalError("expected " + std::to_string(p.inputs.size()) + " inputs, got " +
                    std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Param& in = p.inputs[i];
    bool want_vec = in.dim > 0;
    if (want_vec != args[i].is_vector() ||
        (want_vec && args[i].v->size() != static_cast<std::size_t>(in.dim)))
      throw EvalError("input '" + in.name + "' has wrong shape");
  }
}

void flatten_into(const Value& v, std::vector<Real>& out) {
  if (!v.is_vector()) {
    out.push_back(v.scalar);
    return;
  }
  out.insert(out.end(), v.v->begin(), v.v->end());
}

}  // namespace

Value eval_expr(const Store& store, const Expr& e) {
  Interp in;
  in.store = store;
  return in.eval(e);
}

RunResult run(const Program& p, const std::vector<Value>& args) {
  check_args(p, args);
  Interp in;
  in.store.reserve(p.inputs.size() * 2 + 8);
  for (std::size_t i = 0; i < args.size(); ++i) in.store[p.inputs[i].name] = args[i];
  in.exec(*p.body);
  RunResult r;
  for (const auto& e : p.returns) flatten_into(in.eval(*e), r.outputs);
  r.path = std::move(in.path);
  return r;
}

int input_width(const Program& p) {
  int w = 0;
  for (const auto& in : p.inputs) w += in.dim > 0 ? in.dim : 1;
  return w;
}

std::vector<Value> values_from_flat(const Program& p, const std::vector<Real>& flat) {
  if (flat.size() != static_cast<std::size_t>(input_width(p)))
    throw EvalError("expected " + std::to_string(input_width(p)) + " input components, got " +
                    std::to_string(flat.size()));
  std::vector<Value> out;
  out.reserve(p.inputs.size());
  std::size_t k = 0;
  for (const auto& in : p.inputs) {
    if (in.dim <= 0) {
      out.push_back(Value::num(flat[k++]));
    } else {
      std::vector<Real> comps(flat.begin() + k, flat.begin() + k + in.dim);
      k += in.dim;
      out.push_back(Value::vec(std::move(comps)));
    }
  }
  return out;
}

std::vector<Real> flatten_values(const std::vector<Value>& vals) {
  std::vector<Real> out;
  for (const auto& v : vals) flatten_into(v, out);
  return out;
}

}  // namespace turaco
