#include <cmath>
#include <vector>

#include "doctest.h"
#include "seedrl/rvf/rvf.hpp"

using namespace seedrl;
using namespace seedrl::rvf;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("one_hot basics") {
  const VectorXd v = one_hot(2, 5);
  REQUIRE(v.size() == 5);
  CHECK(v.sum() == 1.0);
  CHECK(v[2] == 1.0);
  CHECK(v[0] == 0.0);
  CHECK_THROWS(one_hot(5, 5));
  CHECK_THROWS(one_hot(-1, 5));
}

TEST_CASE("features_cartpole4 layout") {
  envs::CartpoleState4 s;
  s.phi = 0.0;
  s.phi_dot = 5.0;
  s.x = 1.0;
  s.x_dot = -2.0;
  const VectorXd f = features_cartpole4(s);
  REQUIRE(f.size() == 6);
  CHECK(f[0] == 1.0);
  CHECK(f[1] == 0.0);
  CHECK(f[2] == 0.5);
  CHECK(f[3] == 0.1);
  CHECK(f[4] == -0.2);
  CHECK(f[5] == 0.0);

  s.phi = kPi;
  s.x = 0.05;
  const VectorXd g = features_cartpole4(s);
  CHECK(g[0] == -1.0);
  CHECK(std::abs(g[1]) < 1e-15);
  CHECK(g[5] == 1.0);  // |x| < 0.1 indicator
}

TEST_CASE("linear q_eval is an action-major dot product") {
  LinearParams p;
  p.feature_dim = 2;
  p.n_actions = 2;
  p.theta = VectorXd(4);
  p.theta << 1.0, 2.0, 3.0, 4.0;
  CHECK_NOTHROW(p.validate());

  VectorXd x(2);
  x << 0.5, 1.0;
  const VectorXd q = q_eval(p, x);
  REQUIRE(q.size() == 2);
  CHECK(q[0] == doctest::Approx(2.5));  // 1*0.5 + 2*1
  CHECK(q[1] == doctest::Approx(5.5));  // 3*0.5 + 4*1

  // One-hot features read a single coefficient per action.
  LinearParams t;
  t.feature_dim = 3;
  t.n_actions = 2;
  t.theta = VectorXd::LinSpaced(6, 10.0, 15.0);
  const VectorXd q1 = q_eval(t, one_hot(1, 3));
  CHECK(q1[0] == t.theta[1]);
  CHECK(q1[1] == t.theta[4]);
}

TEST_CASE("MLP shape bookkeeping and glorot init") {
  const MlpShape shape;  // 6 -> 50 -> 50 -> 3 with skip
  CHECK(shape.n_params() == 3071);

  Rng rng(77);
  const MlpParams p = glorot_init(shape, rng);
  CHECK_NOTHROW(p.validate());
  REQUIRE(p.w.size() == 3071);
  REQUIRE(p.w_prior.size() == 3071);
  CHECK(p.prior_scale == 3.0);
  CHECK_FALSE((p.w - p.w_prior).isZero(0.0));  // independent draws

  // Bias segments are all zero; weight segments respect their layer's bound.
  const int b1 = 50 * 6;           // 300
  const int W2 = b1 + 50;          // 350
  const int b2 = W2 + 50 * 50;     // 2850
  const int W3 = b2 + 50;          // 2900
  const int b3 = W3 + 3 * 50;      // 3050
  const int Wskip = b3 + 3;        // 3053
  CHECK(p.w.segment(b1, 50).isZero(0.0));
  CHECK(p.w.segment(b2, 50).isZero(0.0));
  CHECK(p.w.segment(b3, 3).isZero(0.0));
  const double lim1 = std::sqrt(6.0 / (6 + 50));
  const double lim2 = std::sqrt(6.0 / (50 + 50));
  const double lim3 = std::sqrt(6.0 / (50 + 3));
  const double limskip = std::sqrt(6.0 / (6 + 3));
  CHECK(p.w.segment(0, 300).cwiseAbs().maxCoeff() <= lim1);
  CHECK(p.w.segment(W2, 2500).cwiseAbs().maxCoeff() <= lim2);
  CHECK(p.w.segment(W3, 150).cwiseAbs().maxCoeff() <= lim3);
  CHECK(p.w.segment(Wskip, 18).cwiseAbs().maxCoeff() <= limskip);

  // Empirical variance of the h1->h2 weights over several draws matches the
  // uniform variance lim^2 / 3 = 0.02.
  double ss = 0.0;
  int n = 0;
  Rng r2(123);
  for (int d = 0; d < 10; ++d) {
    const MlpParams q = glorot_init(shape, r2);
    ss += q.w.segment(W2, 2500).squaredNorm();
    n += 2500;
  }
  CHECK(std::abs(ss / n - 0.02) < 0.002);

  // Same seed, same draw.
  Rng a(9), b(9);
  const MlpParams pa = glorot_init(shape, a);
  const MlpParams pb = glorot_init(shape, b);
  CHECK((pa.w - pb.w).isZero(0.0));
  CHECK((pa.w_prior - pb.w_prior).isZero(0.0));
}

TEST_CASE("MLP evaluation composes trainable net, prior net, and skip") {
  MlpShape shape;
  shape.in = 3;
  shape.h1 = 4;
  shape.h2 = 4;
  shape.out = 2;
  Rng rng(5);
  MlpParams p = glorot_init(shape, rng, 3.0);
  VectorXd x(3);
  x << 0.3, -1.2, 0.7;

  // Zeroing the trainable net leaves exactly prior_scale * prior output.
  MlpParams zeroed = p;
  zeroed.w.setZero();
  const VectorXd qz = q_eval(zeroed, x);
  const MatrixXd prior_out = mlp_forward(p.w_prior, shape, x);
  CHECK((qz - 3.0 * prior_out.col(0)).cwiseAbs().maxCoeff() < 1e-12);

  // prior_scale = 0 or an empty prior removes the prior term.
  MlpParams no_scale = p;
  no_scale.prior_scale = 0.0;
  const MatrixXd train_out = mlp_forward(p.w, shape, x);
  CHECK((q_eval(no_scale, x) - train_out.col(0)).cwiseAbs().maxCoeff() < 1e-12);
  MlpParams no_prior = p;
  no_prior.w_prior.resize(0);
  CHECK((q_eval(no_prior, x) - train_out.col(0)).cwiseAbs().maxCoeff() < 1e-12);

  // Full eval = trainable + prior_scale * prior; batch eval matches singles.
  const VectorXd q = q_eval(p, x);
  CHECK((q - (train_out.col(0) + 3.0 * prior_out.col(0))).cwiseAbs().maxCoeff() < 1e-12);
  MatrixXd batch(3, 2);
  batch.col(0) = x;
  batch.col(1) = -x;
  const MatrixXd qb = q_eval_batch(p, batch);
  REQUIRE(qb.rows() == 2);
  REQUIRE(qb.cols() == 2);
  CHECK((qb.col(0) - q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((qb.col(1) - q_eval(p, VectorXd(-x))).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("MLP gradient: zero residual, batch additivity, finite differences") {
  MlpShape shape;
  shape.in = 3;
  shape.h1 = 5;
  shape.h2 = 4;
  shape.out = 2;
  Rng rng(2718);

  MlpParams p0 = glorot_init(shape, rng);
  VectorXd x0 = VectorXd::Zero(3);
  x0 << 0.1, 0.2, -0.3;
  CHECK(q_gradient(p0, x0, 0, 0.0).isZero(0.0));

  // Batch gradient is the residual-weighted sum of per-sample gradients.
  MatrixXd xs(3, 3);
  std::vector<int> acts = {0, 1, 0};
  VectorXd res(3);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) xs(i, j) = rng.normal();
    res[j] = rng.normal();
  }
  VectorXd manual = VectorXd::Zero(shape.n_params());
  for (int j = 0; j < 3; ++j) manual += q_gradient(p0, xs.col(j), acts[j], res[j]);
  const VectorXd batch = q_gradient_batch(p0, xs, acts, res);
  CHECK((batch - manual).cwiseAbs().maxCoeff() < 1e-10);

  // Central finite differences on the squared loss, several random configs.
  // Biases get a small jitter: with zero biases and a width-5 layer, a whole
  // layer can die and park a pre-activation exactly on the ReLU kink, where
  // the subgradient and the symmetric difference legitimately disagree.
  const double eps = 1e-6;
  for (int cfg = 0; cfg < 10; ++cfg) {
    MlpParams p = glorot_init(shape, rng);
    for (int i = 0; i < p.w.size(); ++i) p.w[i] += 0.05 * rng.normal();
    VectorXd x(3);
    x << rng.normal(), rng.normal(), rng.normal();
    const int action = cfg % shape.out;
    const double y = rng.normal();
    const double q = q_eval(p, x)[action];
    const VectorXd g = q_gradient(p, x, action, q - y);
    double worst = 0.0;
    for (int i = 0; i < p.w.size(); ++i) {
      MlpParams pp = p;
      pp.w[i] += eps;
      MlpParams pm = p;
      pm.w[i] -= eps;
      const double qp = q_eval(pp, x)[action];
      const double qm = q_eval(pm, x)[action];
      const double fd = (0.5 * (qp - y) * (qp - y) - 0.5 * (qm - y) * (qm - y)) / (2 * eps);
      worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
    }
    REQUIRE(worst < 1e-5);
  }
}

TEST_CASE("adam_step: null update at zero gradient, signed first step, determinism") {
  AdamState st;
  st.learning_rate = 0.01;
  VectorXd params(3);
  params << 1.0, -2.0, 3.0;
  const VectorXd before = params;
  adam_step(st, params, VectorXd::Zero(3));
  CHECK((params - before).isZero(0.0));
  CHECK(st.step == 1);

  // On a fresh state the bias-corrected first step is -lr * sign(g).
  AdamState fresh;
  fresh.learning_rate = 0.01;
  VectorXd q(3);
  q << 1.0, -2.0, 3.0;
  VectorXd g(3);
  g << 0.5, -2.0, 1e-12;  // third entry is within eps of zero
  adam_step(fresh, q, g);
  CHECK(q[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-4));
  CHECK(q[1] == doctest::Approx(-2.0 + 0.01).epsilon(1e-4));
  CHECK(std::abs(q[2] - 3.0) < 0.01);  // damped by eps

  // Same gradient stream gives identical trajectories.
  AdamState s1, s2;
  VectorXd a = VectorXd::Ones(4), b = VectorXd::Ones(4);
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    VectorXd gr(4);
    for (int i = 0; i < 4; ++i) gr[i] = rng.normal();
    adam_step(s1, a, gr);
    adam_step(s2, b, gr);
  }
  CHECK((a - b).isZero(0.0));
}

TEST_CASE("regularized_lsq_solve: closed forms and stationarity") {
  // No data: the solution is the anchor (zeros when the anchor is empty).
  RegConfig cfg;
  cfg.noise_var = 1.0;
  cfg.prior_var = 1.0;
  const VectorXd empty = regularized_lsq_solve(MatrixXd(0, 3), VectorXd(0), cfg);
  CHECK(empty.isZero(0.0));
  cfg.anchor = VectorXd(3);
  cfg.anchor << 1.0, 2.0, 3.0;
  const VectorXd anchored = regularized_lsq_solve(MatrixXd(0, 3), VectorXd(0), cfg);
  CHECK((anchored - cfg.anchor).cwiseAbs().maxCoeff() < 1e-12);

  // Scalar: one unit observation with v = lambda = 1 shrinks halfway.
  RegConfig half;
  MatrixXd X1(1, 1);
  X1 << 1.0;
  VectorXd y1(1);
  y1 << 1.0;
  const VectorXd th = regularized_lsq_solve(X1, y1, half);
  CHECK(th[0] == doctest::Approx(0.5));

  // prior_var <= 0 disables the regularizer: exact interpolation.
  RegConfig pure;
  pure.prior_var = 0.0;
  MatrixXd X2(2, 2);
  X2 << 1.0, 0.0, 1.0, 1.0;
  VectorXd y2(2);
  y2 << 2.0, 5.0;
  const VectorXd exact = regularized_lsq_solve(X2, y2, pure);
  CHECK(exact[0] == doctest::Approx(2.0));
  CHECK(exact[1] == doctest::Approx(3.0));

  // Stationarity of the penalized objective at the returned solution.
  Rng rng(55);
  MatrixXd X(20, 5);
  VectorXd y(20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 5; ++j) X(i, j) = rng.normal();
    y[i] = rng.normal();
  }
  RegConfig rc;
  rc.noise_var = 0.5;
  rc.prior_var = 2.0;
  rc.anchor = VectorXd(5);
  for (int j = 0; j < 5; ++j) rc.anchor[j] = rng.normal();
  const VectorXd sol = regularized_lsq_solve(X, y, rc);
  const VectorXd grad =
      (2.0 / rc.noise_var) * X.transpose() * (X * sol - y) + (2.0 / rc.prior_var) * (sol - rc.anchor);
  CHECK(grad.norm() < 1e-8 * (1.0 + sol.norm()));

  // A tiny prior variance pins the solution to the anchor.
  RegConfig tight = rc;
  tight.prior_var = 1e-10;
  const VectorXd pinned = regularized_lsq_solve(X, y, tight);
  CHECK((pinned - rc.anchor).cwiseAbs().maxCoeff() < 1e-5);
}
