#pragma once

#include "seedrl/seed/lsvi.hpp"

namespace seedrl::seed {

struct SeedTdConfig {
  int sgd_iters = 1;          // N gradient iterations per call
  double learning_rate = 1e-3;
  double discount = 0.99;     // gamma
  int minibatch = 0;          // 0 = full buffer
  double noise_var = 1.0;     // v
  double prior_var = 0.0;     // lambda; <= 0 disables the explicit regularizer
  bool use_adam = true;       // plain descent otherwise

  void validate() const;
};

// N iterations of gradient descent on the mean perturbed Bellman error
//   L(theta) = (1/(vB)) sum_batch (r_j + gamma max_legal_a Q_{theta_prev_iter}(s'_j,a)
//              + z_{k,j} - Q_theta(s_j,a_j))^2 [+ (1/lambda) |theta - theta_hat|^2]
// initialized at theta_prev, where B is the batch size actually used (the
// whole buffer when minibatch = 0). Averaging over the batch keeps the
// data-gradient scale independent of buffer growth, so one learning rate is
// stable across a whole run. Bootstrap targets always use the previous inner
// iterate (no separate target network). Minibatches sample uniformly with the
// supplied generator and evaluate the loss on the minibatch only.
Eigen::VectorXd seed_td_update(const Eigen::VectorXd& theta_prev, const BufferSnapshot& snap,
                               const AgentSeed& seed, const LinearFamily& fam,
                               const SeedTdConfig& cfg, Rng& rng,
                               rvf::AdamState* adam = nullptr);

// Same update for an MLP family; trainable parameters change in place.
// features(transition, next?) maps buffer entries to network inputs; null
// uses the 4D cartpole feature map on the stored raw states.
void seed_td_update_mlp(rvf::MlpParams& params, const BufferSnapshot& snap,
                        const AgentSeed& seed, const SeedTdConfig& cfg, Rng& rng,
                        rvf::AdamState* adam,
                        const std::function<Eigen::VectorXd(const envs::Transition&, bool)>&
                            features = nullptr);

// One-hot fast path: full-buffer gradients from sufficient statistics,
// matching seed_td_update with minibatch = 0 on one-hot families.
Eigen::VectorXd td_onehot(const Eigen::VectorXd& theta_prev, const OnehotStats& st,
                          const AgentZsums& zs, const AgentSeed& seed, const LinearFamily& fam,
                          const SeedTdConfig& cfg, rvf::AdamState* adam = nullptr);

}  // namespace seedrl::seed
