#pragma once

#include <functional>
#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/envs/cartpole.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::rvf {

Eigen::VectorXd one_hot(int index, int n);

// (cos phi, sin phi, phi_dot/10, x/10, x_dot/10, 1{|x|<0.1})
Eigen::VectorXd features_cartpole4(const envs::CartpoleState4& s);

// Q(s,a) = theta_a . features(s); theta stored as one block per action,
// flattened action-major: theta[a*F .. (a+1)*F).
struct LinearParams {
  int feature_dim = 0;
  int n_actions = 0;
  Eigen::VectorXd theta;

  int dim() const { return feature_dim * n_actions; }
  void validate() const;
};

Eigen::VectorXd q_eval(const LinearParams& p, const Eigen::VectorXd& features);

// 2-hidden-layer ReLU MLP (in -> h1 -> h2 -> out) plus a trainable linear
// skip map input -> output, and a frozen prior network of identical shape
// added with weight prior_scale: Q = f(w) + prior_scale * f(w_prior).
struct MlpShape {
  int in = 6;
  int h1 = 50;
  int h2 = 50;
  int out = 3;

  int n_params() const { return h1 * in + h1 + h2 * h1 + h2 + out * h2 + out + out * in; }
};

struct MlpParams {
  MlpShape shape;
  Eigen::VectorXd w;        // trainable, flat
  Eigen::VectorXd w_prior;  // frozen, flat (may be empty: no prior net)
  double prior_scale = 3.0;

  void validate() const;
};

// Weights uniform on +-sqrt(6/(fan_in+fan_out)), biases zero; the trainable
// and prior nets are drawn independently.
MlpParams glorot_init(const MlpShape& shape, Rng& rng, double prior_scale = 3.0);

// Per-action values for one input.
Eigen::VectorXd q_eval(const MlpParams& p, const Eigen::VectorXd& features);
// Trainable-net outputs for a batch (no prior); columns are samples.
Eigen::MatrixXd mlp_forward(const Eigen::VectorXd& w, const MlpShape& shape,
                            const Eigen::MatrixXd& inputs);
// Full Q for a batch, prior included.
Eigen::MatrixXd q_eval_batch(const MlpParams& p, const Eigen::MatrixXd& inputs);

// Gradient w.r.t. the trainable parameters of the contribution
// 0.5 * (Q(s,a) - y)^2, given residual = Q(s,a) - y. The prior net is frozen
// and contributes nothing.
Eigen::VectorXd q_gradient(const MlpParams& p, const Eigen::VectorXd& features, int action,
                           double residual);

// Accumulated q_gradient over a batch: sum_j residual_j * dQ(s_j,a_j)/dw.
Eigen::VectorXd q_gradient_batch(const MlpParams& p, const Eigen::MatrixXd& inputs,
                                 const std::vector<int>& actions,
                                 const Eigen::VectorXd& residuals);

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  Eigen::VectorXd m;  // sized on first use
  Eigen::VectorXd v;
};

void adam_step(AdamState& st, Eigen::VectorXd& params, const Eigen::VectorXd& grad);

struct RegConfig {
  double noise_var = 1.0;   // v
  double prior_var = 1.0;   // lambda; <= 0 means no explicit regularizer
  Eigen::VectorXd anchor;   // theta_hat; empty = zeros

  void validate() const;
};

// argmin_theta (1/v) * sum_j (y_j - x_j.theta)^2 + (1/lambda) * |theta - anchor|^2
// via the normal equations; X rows are feature vectors.
Eigen::VectorXd regularized_lsq_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                      const RegConfig& cfg);

}  // namespace seedrl::rvf
