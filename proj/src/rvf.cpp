#include "seedrl/rvf/rvf.hpp"

#include <cmath>

namespace seedrl::rvf {

using Eigen::Map;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd one_hot(int index, int n) {
  require(index >= 0 && index < n, "one_hot: index out of range");
  VectorXd v = VectorXd::Zero(n);
  v[index] = 1.0;
  return v;
}

VectorXd features_cartpole4(const envs::CartpoleState4& s) {
  VectorXd f(6);
  f << std::cos(s.phi), std::sin(s.phi), s.phi_dot / 10.0, s.x / 10.0, s.x_dot / 10.0,
      (std::abs(s.x) < 0.1 ? 1.0 : 0.0);
  return f;
}

void LinearParams::validate() const {
  require(feature_dim >= 1 && n_actions >= 1, "LinearParams: empty shape");
  require(theta.size() == dim(), "LinearParams: theta size mismatch");
  require(theta.allFinite(), "LinearParams: non-finite entries");
}

VectorXd q_eval(const LinearParams& p, const VectorXd& features) {
  require(features.size() == p.feature_dim, "q_eval: feature size mismatch");
  Map<const MatrixXd> blocks(p.theta.data(), p.feature_dim, p.n_actions);
  return blocks.transpose() * features;
}

namespace {

struct Seg {
  int W1, b1, W2, b2, W3, b3, Wskip;
};

Seg segments(const MlpShape& s) {
  Seg g;
  g.W1 = 0;
  g.b1 = g.W1 + s.h1 * s.in;
  g.W2 = g.b1 + s.h1;
  g.b2 = g.W2 + s.h2 * s.h1;
  g.W3 = g.b2 + s.h2;
  g.b3 = g.W3 + s.out * s.h2;
  g.Wskip = g.b3 + s.out;
  return g;
}

// Forward pass keeping pre-activations for backprop. Columns are samples.
struct Trace {
  MatrixXd z1, a1, z2, a2, out;
};

Trace forward(const VectorXd& w, const MlpShape& s, const MatrixXd& x) {
  const Seg g = segments(s);
  Map<const MatrixXd> W1(w.data() + g.W1, s.h1, s.in);
  Map<const VectorXd> b1(w.data() + g.b1, s.h1);
  Map<const MatrixXd> W2(w.data() + g.W2, s.h2, s.h1);
  Map<const VectorXd> b2(w.data() + g.b2, s.h2);
  Map<const MatrixXd> W3(w.data() + g.W3, s.out, s.h2);
  Map<const VectorXd> b3(w.data() + g.b3, s.out);
  Map<const MatrixXd> Wskip(w.data() + g.Wskip, s.out, s.in);
  Trace t;
  t.z1 = (W1 * x).colwise() + b1;
  t.a1 = t.z1.cwiseMax(0.0);
  t.z2 = (W2 * t.a1).colwise() + b2;
  t.a2 = t.z2.cwiseMax(0.0);
  t.out = ((W3 * t.a2).colwise() + b3) + Wskip * x;
  return t;
}

}  // namespace

void MlpParams::validate() const {
  require(w.size() == shape.n_params(), "MlpParams: trainable size mismatch");
  require(w_prior.size() == 0 || w_prior.size() == shape.n_params(),
          "MlpParams: prior size mismatch");
}

MlpParams glorot_init(const MlpShape& shape, Rng& rng, double prior_scale) {
  auto draw = [&rng, &shape]() {
    VectorXd w = VectorXd::Zero(shape.n_params());
    const Seg g = segments(shape);
    auto fill = [&](int off, int rows, int cols, int fan_in, int fan_out) {
      const double lim = std::sqrt(6.0 / (fan_in + fan_out));
      for (int i = 0; i < rows * cols; ++i) w[off + i] = rng.uniform(-lim, lim);
    };
    fill(g.W1, shape.h1, shape.in, shape.in, shape.h1);
    fill(g.W2, shape.h2, shape.h1, shape.h1, shape.h2);
    fill(g.W3, shape.out, shape.h2, shape.h2, shape.out);
    fill(g.Wskip, shape.out, shape.in, shape.in, shape.out);
    return w;  // bias segments stay zero
  };
  MlpParams p;
  p.shape = shape;
  p.prior_scale = prior_scale;
  p.w = draw();
  p.w_prior = draw();
  return p;
}

MatrixXd mlp_forward(const VectorXd& w, const MlpShape& shape, const MatrixXd& inputs) {
  require(inputs.rows() == shape.in, "mlp_forward: input dim mismatch");
  return forward(w, shape, inputs).out;
}

MatrixXd q_eval_batch(const MlpParams& p, const MatrixXd& inputs) {
  p.validate();
  MatrixXd q = mlp_forward(p.w, p.shape, inputs);
  if (p.w_prior.size() > 0 && p.prior_scale != 0.0) {
    q += p.prior_scale * mlp_forward(p.w_prior, p.shape, inputs);
  }
  return q;
}

VectorXd q_eval(const MlpParams& p, const VectorXd& features) {
  return q_eval_batch(p, features).col(0);
}

VectorXd q_gradient_batch(const MlpParams& p, const MatrixXd& inputs,
                          const std::vector<int>& actions, const VectorXd& residuals) {
  p.validate();
  const MlpShape& s = p.shape;
  const long B = inputs.cols();
  require(static_cast<long>(actions.size()) == B && residuals.size() == B,
          "q_gradient_batch: batch size mismatch");
  const Seg g = segments(s);
  Map<const MatrixXd> W2(p.w.data() + g.W2, s.h2, s.h1);
  Map<const MatrixXd> W3(p.w.data() + g.W3, s.out, s.h2);

  const Trace t = forward(p.w, s, inputs);
  MatrixXd dout = MatrixXd::Zero(s.out, B);
  for (long j = 0; j < B; ++j) {
    require(actions[j] >= 0 && actions[j] < s.out, "q_gradient_batch: action out of range");
    dout(actions[j], j) = residuals[j];
  }
  const MatrixXd dz2 = (W3.transpose() * dout).cwiseProduct((t.z2.array() > 0.0).cast<double>().matrix());
  const MatrixXd dz1 = (W2.transpose() * dz2).cwiseProduct((t.z1.array() > 0.0).cast<double>().matrix());

  VectorXd grad = VectorXd::Zero(s.n_params());
  Map<MatrixXd>(grad.data() + g.W1, s.h1, s.in) = dz1 * inputs.transpose();
  Map<VectorXd>(grad.data() + g.b1, s.h1) = dz1.rowwise().sum();
  Map<MatrixXd>(grad.data() + g.W2, s.h2, s.h1) = dz2 * t.a1.transpose();
  Map<VectorXd>(grad.data() + g.b2, s.h2) = dz2.rowwise().sum();
  Map<MatrixXd>(grad.data() + g.W3, s.out, s.h2) = dout * t.a2.transpose();
  Map<VectorXd>(grad.data() + g.b3, s.out) = dout.rowwise().sum();
  Map<MatrixXd>(grad.data() + g.Wskip, s.out, s.in) = dout * inputs.transpose();
  return grad;
}

VectorXd q_gradient(const MlpParams& p, const VectorXd& features, int action, double residual) {
  VectorXd r(1);
  r[0] = residual;
  return q_gradient_batch(p, features, {action}, r);
}

void adam_step(AdamState& st, VectorXd& params, const VectorXd& grad) {
  require(params.size() == grad.size(), "adam_step: shape mismatch");
  if (st.m.size() != params.size()) {
    st.m = VectorXd::Zero(params.size());
    st.v = VectorXd::Zero(params.size());
    st.step = 0;
  }
  ++st.step;
  st.m = st.beta1 * st.m + (1.0 - st.beta1) * grad;
  st.v = st.beta2 * st.v + (1.0 - st.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  params.array() -=
      st.learning_rate * (st.m.array() / c1) / ((st.v.array() / c2).sqrt() + st.eps);
}

void RegConfig::validate() const {
  require(noise_var > 0, "RegConfig: noise_var must be positive");
}

VectorXd regularized_lsq_solve(const MatrixXd& X, const VectorXd& y, const RegConfig& cfg) {
  cfg.validate();
  require(X.rows() == y.size(), "regularized_lsq_solve: row count mismatch");
  const long d = X.cols();
  VectorXd anchor = cfg.anchor;
  if (anchor.size() == 0) anchor = VectorXd::Zero(d);
  require(anchor.size() == d, "regularized_lsq_solve: anchor size mismatch");
  if (X.rows() == 0) return anchor;
  MatrixXd A = X.transpose() * X / cfg.noise_var;
  VectorXd b = X.transpose() * y / cfg.noise_var;
  if (cfg.prior_var > 0) {
    A.diagonal().array() += 1.0 / cfg.prior_var;
    b += anchor / cfg.prior_var;
    return A.llt().solve(b);
  }
  // No regularizer: plain least squares (needs full column rank for a
  // unique answer; ldlt tolerates the merely semidefinite normal matrix).
  return A.ldlt().solve(b);
}

}  // namespace seedrl::rvf
