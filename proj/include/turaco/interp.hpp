#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "turaco/ast.hpp"

namespace turaco {

// Runtime value: IEEE double scalar or fixed-length vector of doubles.
// Vectors are copy-on-write so values stay cheap to pass around.
struct Value {
  Value() = default;
  static Value num(Real s) {
    Value v;
    v.scalar = s;
    return v;
  }
  static Value vec(std::vector<Real> comps) {
    Value v;
    v.v = std::make_shared<const std::vector<Real>>(std::move(comps));
    return v;
  }
  bool is_vector() const { return static_cast<bool>(v); }
  std::size_t width() const { return v ? v->size() : 1; }

  Real scalar = 0;
  std::shared_ptr<const std::vector<Real>> v;
};

using Store = std::unordered_map<std::string, Value>;

struct RunResult {
  std::vector<Real> outputs;  // return values, vectors flattened in order
  std::string path;           // 'l'/'r' branch labels in execution order
};

// Evaluate an expression (surface or core) in a store. Throws EvalError on
// undefined variables, dimension mismatches, bad indices, and log arguments
// outside the domain |base - v| < base.
Value eval_expr(const Store& store, const Expr& e);

// Execute a program on the given arguments (one Value per input, shapes
// checked against the parameter list).
RunResult run(const Program& p, const std::vector<Value>& args);

// Total number of scalar components across the program's inputs.
int input_width(const Program& p);

// Reassemble per-parameter Values from a flat component vector.
std::vector<Value> values_from_flat(const Program& p, const std::vector<Real>& flat);

// Flatten per-parameter Values into components (inverse of values_from_flat).
std::vector<Real> flatten_values(const std::vector<Value>& vals);

}  // namespace turaco
