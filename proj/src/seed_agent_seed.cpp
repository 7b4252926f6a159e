#include "seedrl/seed/agent_seed.hpp"

namespace seedrl::seed {

int64_t AgentSeed::next_overwrite_slot(int64_t capacity) {
  require(capacity >= 1, "next_overwrite_slot: capacity must be >= 1");
  const int64_t i = overwrite_count_++;
  if (!explicit_perm.empty()) {
    return explicit_perm[i % static_cast<int64_t>(explicit_perm.size())];
  }
  const int64_t cycle = i / capacity;
  if (cycle != cycle_ || static_cast<int64_t>(cycle_perm_.size()) != capacity) {
    cycle_perm_.resize(capacity);
    for (int64_t k = 0; k < capacity; ++k) cycle_perm_[k] = k;
    Rng rng(key3(master, static_cast<uint64_t>(cycle), 0x5045524dULL));
    for (int64_t k = capacity - 1; k > 0; --k) {
      const int64_t j = rng.next_u64() % static_cast<uint64_t>(k + 1);
      std::swap(cycle_perm_[k], cycle_perm_[j]);
    }
    cycle_ = cycle;
  }
  return cycle_perm_[i % capacity];
}

AgentSeed make_agent_seed(int agent_id, uint64_t master, int param_dim, double prior_var,
                          double noise_var, const Eigen::VectorXd* theta_bar) {
  require(prior_var >= 0 && noise_var >= 0, "make_agent_seed: variances must be nonnegative");
  AgentSeed s;
  s.agent_id = agent_id;
  s.master = master;
  s.noise_var = noise_var;
  if (param_dim > 0) {
    s.theta_hat = Eigen::VectorXd::Zero(param_dim);
    const double sd = std::sqrt(prior_var);
    for (int i = 0; i < param_dim; ++i) {
      s.theta_hat[i] = sd * normal_from(key3(master, static_cast<uint64_t>(i), 0x54484154ULL));
    }
    if (theta_bar != nullptr) {
      require(theta_bar->size() == param_dim, "make_agent_seed: theta_bar size mismatch");
      s.theta_hat += *theta_bar;
    }
  }
  return s;
}

}  // namespace seedrl::seed
