#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::seed {

// An agent's intrinsic randomness: a fixed initial parameter draw theta_hat
// and a deterministic per-observation noise stream z_j keyed by (master, j).
// The stream is a pure function of the key, so buffer growth or replay never
// changes an existing z_j.
struct AgentSeed {
  int agent_id = 0;
  uint64_t master = 0;
  double noise_var = 1.0;        // v
  Eigen::VectorXd theta_hat;     // may be empty for agents without parameters

  double noise_for(int64_t j) const {
    return std::sqrt(noise_var) * normal_from(key3(master, static_cast<uint64_t>(j), 0x5a4e4f49ULL));
  }

  // Overwrite-permutation stream for capped buffers: one full random
  // permutation of the slot range per cycle. explicit_perm (tests) overrides.
  std::vector<int64_t> explicit_perm;
  int64_t next_overwrite_slot(int64_t capacity);

 private:
  int64_t overwrite_count_ = 0;
  std::vector<int64_t> cycle_perm_;
  int64_t cycle_ = -1;
};

inline double noise_for(const AgentSeed& s, int64_t j) { return s.noise_for(j); }

// theta_hat ~ N(theta_bar, prior_var * I), drawn from the agent's own stream.
AgentSeed make_agent_seed(int agent_id, uint64_t master, int param_dim, double prior_var,
                          double noise_var, const Eigen::VectorXd* theta_bar = nullptr);

}  // namespace seedrl::seed
