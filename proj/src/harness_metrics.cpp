#include "seedrl/harness/metrics.hpp"

#include <algorithm>

namespace seedrl::harness {

double bipolar_optimal_value(const envs::ChainSpec& spec, int budget) {
  require(budget >= 1, "bipolar_optimal_value: budget must be >= 1");
  const int n = spec.n_vertices;
  tabular::MdpSample m(n, 2);
  for (int v = 0; v < n; ++v) {
    if (v == 0 || v == n - 1) {
      for (int a = 0; a < 2; ++a) m.P[a](v, v) = 1.0;  // absorbing, zero reward
      continue;
    }
    const int left = v - 1;
    const int right = v + 1;
    m.P[0](v, left) = 1.0;
    m.P[1](v, right) = 1.0;
    m.R(v, 0) = (left == 0) ? spec.theta_L : spec.inner_weight;
    m.R(v, 1) = (right == n - 1) ? spec.theta_R : spec.inner_weight;
  }
  tabular::ViOptions opt;
  opt.horizon = budget;
  const auto res = tabular::value_iteration(m, opt);
  return res.V(spec.start_vertex);
}

double parallel_optimal_value(const envs::ParallelChainsSpec& spec) {
  require(!spec.final_edge_rewards.empty(), "parallel_optimal_value: no final-edge rewards");
  return *std::max_element(spec.final_edge_rewards.begin(), spec.final_edge_rewards.end());
}

double compute_regret(double mean_agent_reward, const envs::ChainSpec& spec, int budget) {
  return bipolar_optimal_value(spec, budget) - mean_agent_reward;
}

double compute_regret(double mean_agent_reward, const envs::ParallelChainsSpec& spec) {
  return parallel_optimal_value(spec) - mean_agent_reward;
}

double Evaluator::evaluate(const tabular::TabularPosterior& post) {
  tabular::MdpSample mean = tabular::expected_mdp(post);
  tabular::ViOptions opt;
  opt.discount = settings.plan_discount;
  opt.span_tol = settings.plan_span_tol;
  opt.max_sweeps = settings.plan_max_sweeps;
  if (warm_v.size() == mean.S) opt.warm_v = &warm_v;
  const auto res = tabular::value_iteration(mean, opt);
  warm_v = res.V;

  envs::CartpoleState2 s{kPi, 0.0};  // hanging at rest
  double total = 0.0;
  for (int t = 0; t < settings.horizon; ++t) {
    const int cell = envs::discretize_cartpole(s, grid);
    const int a = res.policy[cell];
    const double force = params.force_set[a];
    s = envs::cartpole_step(s, force, params);
    total += envs::cartpole_reward2(s, force);
  }
  return total;
}

}  // namespace seedrl::harness
