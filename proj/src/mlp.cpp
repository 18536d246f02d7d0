#include "turaco/mlp.hpp"

#include <cmath>
#include <cstring>

#include "turaco/error.hpp"

namespace turaco {
namespace {

void check_shape(const Mlp& m) {
  if (m.in <= 0 || m.hidden <= 0 || m.out <= 0 || m.theta.size() != m.size())
    throw DataError("malformed network shape");
}

// Hidden activations and output error signal for one example; shared by both
// gradient kernels so their per-example arithmetic is identical.
void forward_signals(const Mlp& m, const Real* x, const Real* y, Real inv_scale, Real* hid,
                     Real* dy, Real* sq) {
  const Real* w1 = m.theta.data();
  const Real* b1 = m.theta.data() + m.b1_off();
  const Real* w2 = m.theta.data() + m.w2_off();
  const Real* b2 = m.theta.data() + m.b2_off();
  for (int j = 0; j < m.hidden; ++j) {
    Real acc = b1[j];
    const Real* row = w1 + static_cast<std::size_t>(j) * m.in;
    for (int i = 0; i < m.in; ++i) acc += row[i] * x[i];
    hid[j] = acc > 0 ? acc : 0;
  }
  for (int k = 0; k < m.out; ++k) {
    Real acc = b2[k];
    const Real* row = w2 + static_cast<std::size_t>(k) * m.hidden;
    for (int j = 0; j < m.hidden; ++j) acc += row[j] * hid[j];
    Real diff = acc - y[k];
    sq[k] = diff * diff;
    dy[k] = 2.0 * diff * inv_scale;
  }
}

void backprop_hidden(const Mlp& m, const Real* hid, const Real* dy, Real* dpre) {
  const Real* w2 = m.theta.data() + m.w2_off();
  for (int j = 0; j < m.hidden; ++j) {
    if (hid[j] <= 0) {
      dpre[j] = 0;
      continue;
    }
    Real acc = 0;
    for (int k = 0; k < m.out; ++k) acc += w2[static_cast<std::size_t>(k) * m.hidden + j] * dy[k];
    dpre[j] = acc;
  }
}

}  // namespace

Mlp init_mlp(int in, int hidden, int out, Rng& rng) {
  if (in <= 0 || hidden <= 0 || out <= 0) throw DataError("network dimensions must be positive");
  Mlp m;
  m.in = in;
  m.hidden = hidden;
  m.out = out;
  m.theta.assign(m.size(), 0.0);
  Real bound1 = std::sqrt(6.0 / (in + hidden));
  for (std::size_t i = 0; i < static_cast<std::size_t>(hidden) * in; ++i)
    m.theta[m.w1_off() + i] = rng.uniform(-bound1, bound1);
  Real bound2 = std::sqrt(6.0 / (hidden + out));
  for (std::size_t i = 0; i < static_cast<std::size_t>(out) * hidden; ++i)
    m.theta[m.w2_off() + i] = rng.uniform(-bound2, bound2);
  return m;
}

void mlp_forward(const Mlp& m, const Real* x, Real* y) {
  const Real* w1 = m.theta.data();
  const Real* b1 = m.theta.data() + m.b1_off();
  const Real* w2 = m.theta.data() + m.w2_off();
  const Real* b2 = m.theta.data() + m.b2_off();
  std::vector<Real> hid(m.hidden);
  for (int j = 0; j < m.hidden; ++j) {
    Real acc = b1[j];
    const Real* row = w1 + static_cast<std::size_t>(j) * m.in;
    for (int i = 0; i < m.in; ++i) acc += row[i] * x[i];
    hid[j] = acc > 0 ? acc : 0;
  }
  for (int k = 0; k < m.out; ++k) {
    Real acc = b2[k];
    const Real* row = w2 + static_cast<std::size_t>(k) * m.hidden;
    for (int j = 0; j < m.hidden; ++j) acc += row[j] * hid[j];
    y[k] = acc;
  }
}

Real mlp_batch_loss(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                    const std::vector<std::uint32_t>& idx) {
  check_shape(m);
  std::vector<Real> pred(m.out);
  Real total = 0;
  for (std::uint32_t e : idx) {
    mlp_forward(m, X.data() + static_cast<std::size_t>(e) * m.in, pred.data());
    const Real* y = Y.data() + static_cast<std::size_t>(e) * m.out;
    for (int k = 0; k < m.out; ++k) {
      Real diff = pred[k] - y[k];
      total += diff * diff;
    }
  }
  return total / (static_cast<Real>(idx.size()) * m.out);
}

Real mlp_batch_grad(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                    const std::vector<std::uint32_t>& idx, std::vector<Real>& grad) {
  check_shape(m);
  const std::size_t batch = idx.size();
  const Real inv_scale = 1.0 / (static_cast<Real>(batch) * m.out);
  grad.assign(m.theta.size(), 0.0);

  std::vector<Real> hid(batch * m.hidden);
  std::vector<Real> dy(batch * m.out);
  std::vector<Real> dpre(batch * m.hidden);
  std::vector<Real> sq(batch * m.out);

#pragma omp parallel for schedule(static)
  for (std::size_t e = 0; e < batch; ++e) {
    const Real* x = X.data() + static_cast<std::size_t>(idx[e]) * m.in;
    const Real* y = Y.data() + static_cast<std::size_t>(idx[e]) * m.out;
    forward_signals(m, x, y, inv_scale, hid.data() + e * m.hidden, dy.data() + e * m.out,
                    sq.data() + e * m.out);
    backprop_hidden(m, hid.data() + e * m.hidden, dy.data() + e * m.out,
                    dpre.data() + e * m.hidden);
  }

  Real* gw1 = grad.data();
  Real* gb1 = grad.data() + m.b1_off();
  Real* gw2 = grad.data() + m.w2_off();
  Real* gb2 = grad.data() + m.b2_off();

#pragma omp parallel for schedule(static)
  for (int j = 0; j < m.hidden; ++j) {
    Real* wrow = gw1 + static_cast<std::size_t>(j) * m.in;
    Real bacc = 0;
    for (std::size_t e = 0; e < batch; ++e) {
      Real d = dpre[e * m.hidden + j];
      if (d == 0) continue;
      const Real* x = X.data() + static_cast<std::size_t>(idx[e]) * m.in;
      for (int i = 0; i < m.in; ++i) wrow[i] += d * x[i];
      bacc += d;
    }
    gb1[j] = bacc;
  }

#pragma omp parallel for schedule(static)
  for (int k = 0; k < m.out; ++k) {
    Real* wrow = gw2 + static_cast<std::size_t>(k) * m.hidden;
    Real bacc = 0;
    for (std::size_t e = 0; e < batch; ++e) {
      Real d = dy[e * m.out + k];
      const Real* h = hid.data() + e * m.hidden;
      for (int j = 0; j < m.hidden; ++j) wrow[j] += d * h[j];
      bacc += d;
    }
    gb2[k] = bacc;
  }

  // Same accumulation order as mlp_batch_loss, so the values match bitwise.
  Real total = 0;
  for (std::size_t e = 0; e < batch; ++e)
    for (int k = 0; k < m.out; ++k) total += sq[e * m.out + k];
  return total / (static_cast<Real>(batch) * m.out);
}

Real mlp_batch_grad_serial(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y,
                           const std::vector<std::uint32_t>& idx, std::vector<Real>& grad) {
  check_shape(m);
  const std::size_t batch = idx.size();
  const Real inv_scale = 1.0 / (static_cast<Real>(batch) * m.out);
  grad.assign(m.theta.size(), 0.0);

  Real* gw1 = grad.data();
  Real* gb1 = grad.data() + m.b1_off();
  Real* gw2 = grad.data() + m.w2_off();
  Real* gb2 = grad.data() + m.b2_off();

  std::vector<Real> hid(m.hidden), dy(m.out), dpre(m.hidden), sq(m.out);
  Real total = 0;
  for (std::size_t e = 0; e < batch; ++e) {
    const Real* x = X.data() + static_cast<std::size_t>(idx[e]) * m.in;
    const Real* y = Y.data() + static_cast<std::size_t>(idx[e]) * m.out;
    forward_signals(m, x, y, inv_scale, hid.data(), dy.data(), sq.data());
    backprop_hidden(m, hid.data(), dy.data(), dpre.data());
    for (int k = 0; k < m.out; ++k) total += sq[k];

    for (int j = 0; j < m.hidden; ++j) {
      Real d = dpre[j];
      if (d == 0) continue;
      Real* wrow = gw1 + static_cast<std::size_t>(j) * m.in;
      for (int i = 0; i < m.in; ++i) wrow[i] += d * x[i];
      gb1[j] += d;
    }
    for (int k = 0; k < m.out; ++k) {
      Real d = dy[k];
      Real* wrow = gw2 + static_cast<std::size_t>(k) * m.hidden;
      for (int j = 0; j < m.hidden; ++j) wrow[j] += d * hid[j];
      gb2[k] += d;
    }
  }
  return total / (static_cast<Real>(batch) * m.out);
}

Mlp train_mlp(const std::vector<Real>& X, const std::vector<Real>& Y, int in, int out,
              const TrainOptions& opt, std::uint64_t seed, std::vector<Real>* loss_trace) {
  if (in <= 0 || out <= 0) throw DataError("network dimensions must be positive");
  if (X.size() % in != 0 || Y.size() % out != 0 || X.size() / in != Y.size() / out)
    throw DataError("training arrays do not factor into rows");
  const std::size_t rows = X.size() / in;
  if (rows == 0) throw DataError("empty training set");
  if (opt.width <= 0 || opt.steps < 0 || opt.batch <= 0 || !(opt.lr > 0))
    throw DataError("bad training options");

  Rng rng(seed);
  Mlp m = init_mlp(in, opt.width, out, rng);

  const Real beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<Real> mom(m.theta.size(), 0.0), vel(m.theta.size(), 0.0), grad;
  std::vector<std::uint32_t> idx(opt.batch);
  if (loss_trace) loss_trace->reserve(loss_trace->size() + opt.steps);

  for (int step = 1; step <= opt.steps; ++step) {
    for (auto& e : idx) e = static_cast<std::uint32_t>(rng.uniform_index(rows));
    Real loss = opt.parallel ? mlp_batch_grad(m, X, Y, idx, grad)
                             : mlp_batch_grad_serial(m, X, Y, idx, grad);
    if (loss_trace) loss_trace->push_back(loss);

    Real c1 = 1.0 - std::pow(beta1, step);
    Real c2 = 1.0 - std::pow(beta2, step);
#pragma omp parallel for schedule(static) if (opt.parallel)
    for (std::size_t i = 0; i < m.theta.size(); ++i) {
      mom[i] = beta1 * mom[i] + (1.0 - beta1) * grad[i];
      vel[i] = beta2 * vel[i] + (1.0 - beta2) * grad[i] * grad[i];
      Real mh = mom[i] / c1;
      Real vh = vel[i] / c2;
      m.theta[i] -= opt.lr * mh / (std::sqrt(vh) + eps);
    }
  }
  return m;
}

Real mlp_mae(const Mlp& m, const std::vector<Real>& X, const std::vector<Real>& Y) {
  check_shape(m);
  if (X.size() % m.in != 0 || Y.size() % m.out != 0 || X.size() / m.in != Y.size() / m.out)
    throw DataError("evaluation arrays do not factor into rows");
  const std::size_t rows = X.size() / m.in;
  if (rows == 0) throw DataError("empty evaluation set");
  std::vector<Real> pred(m.out);
  Real total = 0;
  for (std::size_t e = 0; e < rows; ++e) {
    mlp_forward(m, X.data() + e * m.in, pred.data());
    const Real* y = Y.data() + e * m.out;
    for (int k = 0; k < m.out; ++k) total += std::abs(pred[k] - y[k]);
  }
  return total / (static_cast<Real>(rows) * m.out);
}

}  // namespace turaco
