#pragma once

#include <cmath>
#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/envs/chains.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::tabular {

// Structured reward belief for the bipolar chain: transitions are known and
// deterministic, and the only unknown is the orientation, theta_R = +N or -N.
// p is the posterior probability that theta_R = +N; a single endpoint arrival
// reveals everything.
struct BipolarBelief {
  double p = 0.5;
  bool revealed = false;
  bool right_positive = false;  // valid once revealed

  void reveal(double theta_R) {
    revealed = true;
    right_positive = theta_R > 0;
    p = right_positive ? 1.0 : 0.0;
  }
  // Marginal over u ~ U(0,1) equals the posterior; fixed u gives commitment.
  bool sample_right_positive(double u) const { return u < p; }
};

// Walk one step toward the chosen endpoint (action 0 = left, 1 = right).
inline int bipolar_walk_action(bool toward_right) { return toward_right ? 1 : 0; }

// Structured belief for the parallel chains: per-chain Gaussian over theta_c,
// collapsing exactly when the chain's final edge is observed.
struct ParallelBelief {
  Eigen::VectorXd mu;
  Eigen::VectorXd var;
  std::vector<char> known;

  explicit ParallelBelief(const envs::ParallelChainsSpec& spec) {
    const int C = spec.n_chains;
    mu = Eigen::VectorXd::Zero(C);
    var = Eigen::VectorXd::Zero(C);
    for (int c = 0; c < C; ++c) var[c] = spec.sigma0_sq + (c + 1);
    known.assign(C, 0);
  }

  void observe(int chain, double theta) {
    mu[chain] = theta;
    var[chain] = 0.0;
    known[chain] = 1;
  }

  // theta_c draw given one standard-normal xi per chain; fixed xi = seed
  // sampling, fresh xi = Thompson resampling.
  double sample(int chain, double xi) const {
    return mu[chain] + std::sqrt(var[chain]) * xi;
  }
  double ucb(int chain, double delta) const {
    return mu[chain] + std::sqrt(2.0 * std::log(1.0 / delta) * var[chain]);
  }
};

// Argmax with ties toward the lowest index.
inline int argmax_low(const Eigen::VectorXd& v) {
  int best = 0;
  for (int i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace seedrl::tabular
