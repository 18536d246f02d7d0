#pragma once

#include <cstdint>
#include <vector>

#include "turaco/ast.hpp"
#include "turaco/rng.hpp"

namespace turaco {

// One-hidden-layer ReLU network. Parameters live in a single flat vector laid
// out [w1 row-major | b1 | w2 row-major | b2], so the optimizer and finite
// difference checks can treat the model as a point in R^n.
struct Mlp {
  int in = 0, hidden = 0, out = 0;
  std::vector<Real> theta;

  std::size_t w1_off() const { return 0; }
  std::size_t b1_off() const { return static_cast<std::size_t>(hidden) * in; }
  std::size_t w2_off() const { return b1_off() + hidden; }
  std::size_t b2_off() const { return w2_off() + static_cast<std::size_t>(out) * hidden; }
  std::size_t size() const { return b2_off() + out; }
};

// Glorot-uniform weights with bound sqrt(6/(fan_in+fan_out)), drawn in layout
// order (all of w1, then all of w2); biases start at zero.
Mlp init_mlp(int in, int hidden, int out, Rng& rng);

// y = w2 relu(w1 x + b1) + b2 for a single example.
void mlp_forward(const Mlp& m, const Real* x, Real* y);

// Mean squared error over the index list: mean over examples and outputs.
// X is rows*in row-major, Y rows*out.
Real mlp_batch_loss(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                    const std::vector<std::uint32_t>& idx);

// Loss plus its gradient in the theta layout. The parallel kernel stages
// per-example activations, then reduces every parameter over examples in
// index order; the serial reference accumulates example by example. The two
// add the same numbers in the same order, so they agree bit for bit.
Real mlp_batch_grad(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                    const std::vector<std::uint32_t>& idx, std::vector<Real>& grad);
Real mlp_batch_grad_serial(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                           const std::vector<std::uint32_t>& idx, std::vector<Real>& grad);

struct TrainOptions {
  int width = 256;
  int steps = 2000;
  Real lr = 0.0005;
  int batch = 128;
  bool parallel = true;
};

// Adam (beta1 0.9, beta2 0.999, eps 1e-8 added outside the square root) with
// bias correction, on minibatches drawn with replacement from one stream.
// A seed pins initialization and the whole batch sequence. When loss_trace
// is given it receives the pre-update batch loss of every step.
Mlp train_mlp(const std::vector<Real>& X, const std::vector<Real>& Y, int in, int out,
              const TrainOptions& opt, std::uint64_t seed,
              std::vector<Real>* loss_trace = nullptr);

// Mean absolute error over all rows: mean over examples and outputs.
Real mlp_mae(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y);

}  // namespace turaco
