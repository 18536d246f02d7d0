#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "turaco/alloc.hpp"
#include "turaco/error.hpp"
#include "turaco/mlp.hpp"
#include "turaco/parser.hpp"
#include "turaco/sample.hpp"
#include "turaco/surrogate.hpp"
#include "turaco/tilde.hpp"

using namespace turaco;

namespace {

Mlp hand_net_221() {
  Mlp m;
  m.in = 2;
  m.hidden = 2;
  m.out = 1;
  // [w1 | b1 | w2 | b2] with w1 rows (1,2) and (3,4).
  m.theta = {1.0, 2.0, 3.0, 4.0, 0.5, -0.5, 1.0, -1.0, 0.25};
  return m;
}

Real forward1(const Mlp& m, std::vector<Real> x) {
  std::vector<Real> y(m.out);
  mlp_forward(m, x.data(), y.data());
  return y[0];
}

// Pre-activation of hidden unit j on example x.
Real preact(const Mlp& m, const Real* x, int j) {
  Real acc = m.theta[m.b1_off() + j];
  for (int i = 0; i < m.in; ++i) acc += m.theta[m.w1_off() + j * m.in + i] * x[i];
  return acc;
}

}  // namespace

TEST_CASE("initialization: deterministic, bounded, biases at zero") {
  Rng r1(9), r2(9), r3(10);
  Mlp a = init_mlp(3, 4, 2, r1);
  Mlp b = init_mlp(3, 4, 2, r2);
  Mlp c = init_mlp(3, 4, 2, r3);
  CHECK(a.theta == b.theta);
  CHECK(a.theta != c.theta);
  REQUIRE(a.theta.size() == 26);

  Real bound1 = std::sqrt(6.0 / (3 + 4));
  Real bound2 = std::sqrt(6.0 / (4 + 2));
  for (std::size_t i = a.w1_off(); i < a.b1_off(); ++i) CHECK(std::fabs(a.theta[i]) <= bound1);
  for (std::size_t i = a.b1_off(); i < a.w2_off(); ++i) CHECK(a.theta[i] == 0.0);
  for (std::size_t i = a.w2_off(); i < a.b2_off(); ++i) CHECK(std::fabs(a.theta[i]) <= bound2);
  for (std::size_t i = a.b2_off(); i < a.size(); ++i) CHECK(a.theta[i] == 0.0);

  CHECK_THROWS_AS(init_mlp(0, 4, 2, r1), DataError);
  CHECK_THROWS_AS(init_mlp(3, -1, 2, r1), DataError);
}

TEST_CASE("forward pass on a hand-computed network") {
  Mlp m = hand_net_221();
  // x=(1,-1): both pre-activations negative, so only the output bias is left.
  CHECK(forward1(m, {1.0, -1.0}) == 0.25);
  // x=(1,1): hidden (3.5, 6.5), y = 3.5 - 6.5 + 0.25.
  CHECK(forward1(m, {1.0, 1.0}) == -2.75);

  Mlp zero;
  zero.in = 2;
  zero.hidden = 3;
  zero.out = 2;
  zero.theta.assign(zero.size(), 0.0);
  zero.theta[zero.b2_off()] = 0.3;
  zero.theta[zero.b2_off() + 1] = -0.7;
  std::vector<Real> y(2);
  std::vector<Real> x = {0.4, -1.2};
  mlp_forward(zero, x.data(), y.data());
  CHECK(y[0] == 0.3);
  CHECK(y[1] == -0.7);
}

TEST_CASE("batch loss is the mean over examples and outputs") {
  Mlp m = hand_net_221();
  std::vector<Real> X = {1.0, 1.0, 1.0, -1.0};
  std::vector<Real> Y = {0.0, 1.0};
  // Residuals -2.75 and -0.75, so (7.5625 + 0.5625) / 2.
  CHECK(mlp_batch_loss(m, X, Y, {0, 1}) == 4.0625);
  CHECK(mlp_batch_loss(m, X, Y, {0}) == 7.5625);
  CHECK(mlp_batch_loss(m, X, Y, {1, 1}) == 0.5625);
}

TEST_CASE("analytic gradients match central differences") {
  Rng rng(2024);
  const int in = 3, hidden = 4, out = 2, batch = 8;
  int checked = 0;
  while (checked < 100) {
    Mlp m = init_mlp(in, hidden, out, rng);
    std::vector<Real> X(batch * in), Y(batch * out);
    for (auto& v : X) v = rng.uniform(-1.0, 1.0);
    for (auto& v : Y) v = rng.uniform(-1.0, 1.0);

    // Stay clear of the ReLU kink so the loss is differentiable at theta and
    // the finite difference probes never cross it.
    bool clear = true;
    for (int e = 0; e < batch && clear; ++e)
      for (int j = 0; j < hidden && clear; ++j)
        if (std::fabs(preact(m, X.data() + e * in, j)) < 1e-2) clear = false;
    if (!clear) continue;
    ++checked;

    std::vector<std::uint32_t> idx(batch);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<Real> grad;
    mlp_batch_grad_serial(m, X, Y, idx, grad);

    const Real h = 1e-5;
    for (std::size_t p = 0; p < m.theta.size(); ++p) {
      Mlp up = m, dn = m;
      up.theta[p] += h;
      dn.theta[p] -= h;
      Real numeric = (mlp_batch_loss(up, X, Y, idx) - mlp_batch_loss(dn, X, Y, idx)) / (2.0 * h);
      Real err = std::fabs(grad[p] - numeric);
      Real scale = std::max(std::fabs(grad[p]), std::fabs(numeric));
      CHECK(err <= std::max(1e-4 * scale, 1e-8));
    }
  }
}

TEST_CASE("parallel and serial gradient kernels agree bit for bit") {
  Rng rng(314);
  for (int hidden : {1, 5, 64}) {
    const int in = 2, out = 3, rows = 20;
    Mlp m = init_mlp(in, hidden, out, rng);
    std::vector<Real> X(rows * in), Y(rows * out);
    for (auto& v : X) v = rng.uniform(-2.0, 2.0);
    for (auto& v : Y) v = rng.uniform(-2.0, 2.0);
    // Duplicate indices happen when sampling with replacement; keep some here.
    std::vector<std::uint32_t> idx = {0, 7, 7, 3, 19, 0, 11};
    std::vector<Real> ga, gs;
    Real la = mlp_batch_grad(m, X, Y, idx, ga);
    Real ls = mlp_batch_grad_serial(m, X, Y, idx, gs);
    CHECK(la == ls);
    CHECK(ga == gs);
    CHECK(la == mlp_batch_loss(m, X, Y, idx));
  }
}

TEST_CASE("one optimizer step matches a hand-rolled replication") {
  const int in = 2, out = 1, rows = 10;
  const std::uint64_t seed = 77;
  TrainOptions opt;
  opt.width = 3;
  opt.steps = 1;
  opt.lr = 0.01;
  opt.batch = 4;
  opt.parallel = false;

  Rng data_rng(1);
  std::vector<Real> X(rows * in), Y(rows * out);
  for (auto& v : X) v = data_rng.uniform(-1.0, 1.0);
  for (auto& v : Y) v = data_rng.uniform(-1.0, 1.0);

  Mlp got = train_mlp(X, Y, in, out, opt, seed);

  // Mirror the training loop: init and batch draws share one stream.
  Rng rng(seed);
  Mlp m = init_mlp(in, opt.width, out, rng);
  std::vector<std::uint32_t> idx(opt.batch);
  for (auto& e : idx) e = static_cast<std::uint32_t>(rng.uniform_index(rows));
  std::vector<Real> grad;
  mlp_batch_grad_serial(m, X, Y, idx, grad);
  const Real beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  for (std::size_t i = 0; i < m.theta.size(); ++i) {
    Real mom = (1.0 - beta1) * grad[i];
    Real vel = (1.0 - beta2) * grad[i] * grad[i];
    Real mh = mom / (1.0 - std::pow(beta1, 1));
    Real vh = vel / (1.0 - std::pow(beta2, 1));
    m.theta[i] -= opt.lr * mh / (std::sqrt(vh) + eps);
  }
  CHECK(got.theta == m.theta);

  // steps=0 hands back the freshly initialized network.
  opt.steps = 0;
  Rng rng0(seed);
  CHECK(train_mlp(X, Y, in, out, opt, seed).theta == init_mlp(in, opt.width, out, rng0).theta);
}

TEST_CASE("training is deterministic and kernel-choice independent") {
  Rng data_rng(6);
  const int rows = 64;
  std::vector<Real> X(rows), Y(rows);
  for (int i = 0; i < rows; ++i) {
    X[i] = data_rng.uniform(-1.0, 1.0);
    Y[i] = std::sin(2.0 * X[i]);
  }
  TrainOptions opt;
  opt.width = 8;
  opt.steps = 60;
  opt.lr = 0.005;
  opt.batch = 16;

  Mlp a = train_mlp(X, Y, 1, 1, opt, 5);
  Mlp b = train_mlp(X, Y, 1, 1, opt, 5);
  CHECK(a.theta == b.theta);
  CHECK(a.theta != train_mlp(X, Y, 1, 1, opt, 6).theta);

  TrainOptions serial = opt;
  serial.parallel = false;
  CHECK(a.theta == train_mlp(X, Y, 1, 1, serial, 5).theta);
}

TEST_CASE("a constant target is learned to well under a milli") {
  Rng data_rng(3);
  const int rows = 50;
  std::vector<Real> X(rows), Y(rows, 0.7);
  for (auto& v : X) v = data_rng.uniform(-1.0, 1.0);
  TrainOptions opt;
  opt.width = 16;
  opt.steps = 2000;
  opt.lr = 0.005;
  opt.batch = 16;
  Mlp m = train_mlp(X, Y, 1, 1, opt, 8);
  CHECK(mlp_mae(m, X, Y) < 1e-3);
}

TEST_CASE("the loss trace trends downward") {
  Rng data_rng(12);
  const int rows = 256;
  std::vector<Real> X(rows), Y(rows);
  for (int i = 0; i < rows; ++i) {
    X[i] = data_rng.uniform(-1.0, 1.0);
    Y[i] = std::sin(2.0 * X[i]) + 0.5 * X[i];
  }
  TrainOptions opt;
  opt.width = 32;
  opt.steps = 1000;
  opt.lr = 0.005;
  opt.batch = 32;
  std::vector<Real> trace;
  train_mlp(X, Y, 1, 1, opt, 4, &trace);
  REQUIRE(trace.size() == 1000);
  Real head = std::accumulate(trace.begin(), trace.begin() + 100, 0.0) / 100.0;
  Real tail = std::accumulate(trace.end() - 100, trace.end(), 0.0) / 100.0;
  CHECK(tail < head);
}

TEST_CASE("mean absolute error on the hand network") {
  Mlp m = hand_net_221();
  std::vector<Real> X = {1.0, 1.0, 1.0, -1.0};
  std::vector<Real> Y = {0.0, 1.0};
  CHECK(mlp_mae(m, X, Y) == 1.75);
}

TEST_CASE("shape validation") {
  std::vector<Real> X = {1.0, 2.0, 3.0};
  std::vector<Real> Y = {1.0, 2.0};
  TrainOptions opt;
  CHECK_THROWS_AS(train_mlp(X, Y, 2, 1, opt, 1), DataError);
  CHECK_THROWS_AS(train_mlp({}, {}, 1, 1, opt, 1), DataError);
  TrainOptions bad = opt;
  bad.lr = 0.0;
  CHECK_THROWS_AS(train_mlp({1.0}, {1.0}, 1, 1, bad, 1), DataError);
  bad = opt;
  bad.batch = 0;
  CHECK_THROWS_AS(train_mlp({1.0}, {1.0}, 1, 1, bad, 1), DataError);

  Mlp malformed = hand_net_221();
  malformed.theta.pop_back();
  std::vector<Real> g;
  CHECK_THROWS_AS(mlp_batch_grad(malformed, X, Y, {0}, g), DataError);
  CHECK_THROWS_AS(mlp_mae(malformed, X, Y), DataError);
}

TEST_CASE("training beats an untrained network by an order of magnitude") {
  Program p = parse_file(TURACO_SOURCE_DIR "/benchmarks/luminance.turaco");
  SampleConfig cfg = load_config(TURACO_SOURCE_DIR "/benchmarks/luminance.json");

  std::vector<PathStat> stats;
  for (const auto& pc : program_complexities(p)) {
    auto it = cfg.frequency_override.find(pc.path);
    stats.push_back({pc.path, it == cfg.frequency_override.end() ? 0.0 : it->second, pc.zeta});
  }
  Plan plan = plan_budget(stats, 0.1, Method::Complexity);
  auto counts = integerize(plan, 1000);
  std::map<std::string, long long> want;
  for (std::size_t i = 0; i < plan.paths.size(); ++i) want[plan.paths[i].path] = counts[i];
  Dataset d = build_dataset(p, cfg, want, 42);

  TrainOptions opt;  // width 256, 2000 steps
  StratifiedSurrogate trained = train_surrogate(d, opt, 7);
  TrainOptions frozen = opt;
  frozen.steps = 0;
  StratifiedSurrogate untrained = train_surrogate(d, frozen, 7);

  EvalStats on = evaluate_surrogate(trained, p, cfg, 2000, 99);
  EvalStats off = evaluate_surrogate(untrained, p, cfg, 2000, 99);
  CHECK(on.scored == 2000);
  CHECK(off.mae >= 10.0 * on.mae);
}
