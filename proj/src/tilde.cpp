#include "turaco/tilde.hpp"

#include <cmath>
#include <functional>

#include "turaco/error.hpp"
#include "turaco/pretty.hpp"

namespace turaco {
namespace {

TildeValue scalar(DualBound b) { return TildeValue{false, {b}}; }

TildeValue map1(const TildeValue& a, const std::function<DualBound(DualBound)>& f) {
  TildeValue out;
  out.is_vec = a.is_vec;
  out.comps.reserve(a.comps.size());
  for (const auto& c : a.comps) out.comps.push_back(f(c));
  return out;
}

TildeValue map2(const TildeValue& a, const TildeValue& b,
                const std::function<DualBound(DualBound, DualBound)>& f) {
  if (!a.is_vec && !b.is_vec) return scalar(f(a.comps[0], b.comps[0]));
  if (a.is_vec && b.is_vec) {
    if (a.comps.size() != b.comps.size())
      throw AnalysisError("vector length mismatch in the analysis");
    TildeValue out;
    out.is_vec = true;
    out.comps.reserve(a.comps.size());
    for (std::size_t i = 0; i < a.comps.size(); ++i) out.comps.push_back(f(a.comps[i], b.comps[i]));
    return out;
  }
  const TildeValue& vec = a.is_vec ? a : b;
  DualBound s = a.is_vec ? b.comps[0] : a.comps[0];
  TildeValue out;
  out.is_vec = true;
  out.comps.reserve(vec.comps.size());
  for (const auto& c : vec.comps) out.comps.push_back(a.is_vec ? f(c, s) : f(s, c));
  return out;
}

DualBound t_add(DualBound a, DualBound b) { return {a.t + b.t, a.d + b.d}; }
DualBound t_mul(DualBound a, DualBound b) { return {a.t * b.t, a.d * b.t + a.t * b.d}; }

DualBound t_log(Real base, DualBound a) {
  Real radius = base / std::sqrt(base * base + 1.0);
  Real rest = base - a.t * std::sqrt(base * base + 1.0);
  if (!(rest > 0.0))
    throw AnalysisError("log{" + format_real(base) + "} argument bound " + format_real(a.t) +
                        " reaches the divergence radius " + format_real(radius) +
                        "; rescale the argument first, e.g. log(x) = log(x/c) + log(c)");
  Real lb = std::log(base);
  return {std::abs(lb) + lb - std::log(rest), a.d / rest};
}

struct Analyzer {
  TildeEnv env;

  TildeValue eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Constant:
        return scalar({std::abs(e.value), 0.0});
      case ExprKind::Var: {
        auto it = env.find(e.name);
        if (it == env.end()) throw AnalysisError("undefined variable '" + e.name + "'");
        return it->second;
      }
      case ExprKind::Negate:
        return eval(*e.args[0]);
      case ExprKind::Add:
        return map2(eval(*e.args[0]), eval(*e.args[1]), t_add);
      case ExprKind::Mul:
        return map2(eval(*e.args[0]), eval(*e.args[1]), t_mul);
      case ExprKind::Sin:
        return map1(eval(*e.args[0]),
                    [](DualBound a) -> DualBound { return {std::sinh(a.t), a.d * std::cosh(a.t)}; });
      case ExprKind::Cos:
        return map1(eval(*e.args[0]),
                    [](DualBound a) -> DualBound { return {std::cosh(a.t), a.d * std::sinh(a.t)}; });
      case ExprKind::Exp:
        return map1(eval(*e.args[0]),
                    [](DualBound a) -> DualBound { return {std::exp(a.t), a.d * std::exp(a.t)}; });
      case ExprKind::Log: {
        Real b = e.value;
        return map1(eval(*e.args[0]), [b](DualBound a) { return t_log(b, a); });
      }
      case ExprKind::VectorLit: {
        TildeValue out;
        out.is_vec = true;
        out.comps.reserve(e.args.size());
        for (const auto& a : e.args) {
          TildeValue v = eval(*a);
          if (v.is_vec) throw AnalysisError("vector literal elements must be scalars");
          out.comps.push_back(v.comps[0]);
        }
        return out;
      }
      case ExprKind::Index: {
        TildeValue base = eval(*e.args[0]);
        if (!base.is_vec) throw AnalysisError("indexing a scalar value");
        if (e.index < 0 || static_cast<std::size_t>(e.index) >= base.comps.size())
          throw AnalysisError("index " + std::to_string(e.index) + " out of range");
        return scalar(base.comps[e.index]);
      }
      case ExprKind::Sub:
      case ExprKind::DivConst:
        break;
    }
    throw AnalysisError("analysis requires a core program");
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
        env[s.target] = TildeValue{true, std::vector<DualBound>(s.dim, DualBound{0.0, 0.0})};
        return;
      case StmtKind::Assign: {
        if (s.op != AssignOp::Set) throw AnalysisError("analysis requires a core program");
        TildeValue rhs = eval(*s.expr);
        if (s.target_index < 0) {
          env[s.target] = std::move(rhs);
          return;
        }
        auto it = env.find(s.target);
        if (it == env.end()) throw AnalysisError("undefined variable '" + s.target + "'");
        if (!it->second.is_vec || rhs.is_vec ||
            static_cast<std::size_t>(s.target_index) >= it->second.comps.size())
          throw AnalysisError("bad indexed assignment to '" + s.target + "'");
        it->second.comps[s.target_index] = rhs.comps[0];
        return;
      }
      case StmtKind::If:
        throw AnalysisError("analysis runs on straight-line traces, not branching programs");
    }
    throw AnalysisError("unreachable statement kind");
  }
};

}  // namespace

TildeValue tilde_expr(const TildeEnv& env, const Expr& e) {
  Analyzer a;
  a.env = env;
  return a.eval(e);
}

Real trace_complexity(const Program& p, const Trace& t) {
  Analyzer a;
  for (const auto& in : p.inputs) {
    if (in.dim <= 0) {
      a.env[in.name] = scalar({1.0, 1.0});
    } else {
      a.env[in.name] = TildeValue{true, std::vector<DualBound>(in.dim, DualBound{1.0, 1.0})};
    }
  }
  a.exec(*t.body);
  Real sum = 0;
  for (const auto& e : t.returns) {
    TildeValue v = a.eval(*e);
    for (const auto& c : v.comps) sum += c.d;
  }
  return sum * sum;
}

std::vector<PathComplexity> program_complexities(const Program& p, std::size_t cap) {
  std::vector<PathComplexity> out;
  for (const auto& t : collect_traces(p, cap)) out.push_back({t.path, trace_complexity(p, t)});
  return out;
}

}  // namespace turaco
