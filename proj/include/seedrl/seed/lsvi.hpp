#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "seedrl/rvf/rvf.hpp"
#include "seedrl/seed/agent_seed.hpp"
#include "seedrl/seed/buffer.hpp"

namespace seedrl::seed {

// Linear value family over discrete states: Q(s,a) = theta_a . phi(s), one
// weight block per action. Default phi is the one-hot encoding of the state
// id; legal_mask lets envs with state-dependent action sets (the parallel
// chains) exclude impossible moves from maxima.
struct LinearFamily {
  int n_states = 0;
  int n_actions = 0;
  int feature_dim = 0;
  std::function<Eigen::VectorXd(int)> features;   // null => one-hot(state)
  std::function<uint32_t(int)> legal_mask;        // null => all actions legal

  bool one_hot() const { return !features; }
  Eigen::VectorXd feat(int s) const;
  uint32_t mask(int s) const {
    return legal_mask ? legal_mask(s) : (n_actions >= 32 ? ~0u : ((1u << n_actions) - 1));
  }
  int dim() const { return feature_dim * n_actions; }

  static LinearFamily make_one_hot(int S, int A);
};

struct SeedLsviConfig {
  int planning_horizon = 1;  // H
  rvf::RegConfig reg;        // v, lambda; anchor comes from the agent seed

  void validate() const;
};

// Backward recursion h = H-1..0 from theta_H = 0; each step fits targets
// r_j + max_legal_a Q_{theta_{h+1}}(s'_j, a) + z_{k,j} by an exact
// regularized least-squares solve anchored at theta_hat. Terminal next
// states contribute no bootstrap. Empty buffer returns theta_hat.
Eigen::VectorXd seed_lsvi_plan(const BufferSnapshot& snap, const AgentSeed& seed,
                               const LinearFamily& fam, const SeedLsviConfig& cfg);

// Argmax over the state's legal actions, ties toward the lowest index.
int greedy_action(const Eigen::VectorXd& theta, const LinearFamily& fam, int state);
int greedy_action(const Eigen::VectorXd& q_values, uint32_t legal_mask);

// --- One-hot sufficient statistics (fast path) ---------------------------
// For one-hot features the per-(s,a) regression decouples; everything the
// solver needs is counts, reward sums, next-state counts, and the agent's
// noise sums. Incremental catch-up keeps per-event replans O(S*A).

struct OnehotStats {
  int S = 0;
  int A = 0;
  Eigen::ArrayXXd n;      // S x A observation counts
  Eigen::ArrayXXd sum_r;  // S x A reward sums
  // Per (s*A + a): (next state, count), nonterminal transitions only.
  std::vector<std::vector<std::pair<int32_t, double>>> next_counts;
  int64_t processed = 0;

  OnehotStats() = default;
  OnehotStats(int S_, int A_);
  void add(const envs::Transition& t);
  void catch_up(const BufferSnapshot& snap);
};

struct AgentZsums {
  Eigen::ArrayXXd sum_z;  // S x A
  int64_t processed = 0;

  AgentZsums() = default;
  AgentZsums(int S, int A);
  void catch_up(const BufferSnapshot& snap, const AgentSeed& seed);
};

// Identical to seed_lsvi_plan on one-hot families (up to float round-off),
// but O(H * S * A) instead of re-walking the buffer.
Eigen::VectorXd lsvi_onehot(const OnehotStats& st, const AgentZsums& zs, const AgentSeed& seed,
                            const LinearFamily& fam, const SeedLsviConfig& cfg);

}  // namespace seedrl::seed
