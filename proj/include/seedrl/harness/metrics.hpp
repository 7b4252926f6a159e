#pragma once

#include <Eigen/Dense>
#include <limits>
#include <utility>
#include <vector>

#include "seedrl/envs/cartpole.hpp"
#include "seedrl/envs/chains.hpp"
#include "seedrl/tabular/tabular.hpp"

namespace seedrl::harness {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Outcome of one concurrent run (one environment instance, one K).
struct RunMetrics {
  int K = 0;
  Eigen::VectorXd per_agent_reward;  // realized cumulative reward per agent
  double mean_agent_reward = kNan;
  double optimal_value = kNan;            // oracle per-agent optimum (chains only)
  double mean_regret_per_agent = kNan;    // chains only
  double eval_reward_final = kNan;        // tabular cartpole only
  std::vector<std::pair<double, double>> eval_curve;  // (time, greedy eval reward)
  double team_total_reward = kNan;        // continuous cartpole only
  std::vector<std::pair<double, double>> team_curve;  // (tick, cumulative team reward)
  int64_t n_observations = 0;
};

// Oracle per-agent optimal values. The bipolar value is for an agent that acts
// `budget` times from the start vertex under full knowledge of the chain; the
// parallel-chains value is the best final-edge payout.
double bipolar_optimal_value(const envs::ChainSpec& spec, int budget);
double parallel_optimal_value(const envs::ParallelChainsSpec& spec);

// Regret per agent = oracle optimum minus realized mean agent reward.
double compute_regret(double mean_agent_reward, const envs::ChainSpec& spec, int budget);
double compute_regret(double mean_agent_reward, const envs::ParallelChainsSpec& spec);

// Greedy evaluation for tabular cartpole: plan in the posterior-mean model,
// then roll the greedy policy out in the true environment.
struct EvalSettings {
  int horizon = 1000;          // rollout length in environment steps
  double plan_discount = 0.99;
  double plan_span_tol = 1e-6;
  int plan_max_sweeps = 2000;
};

struct Evaluator {
  envs::CartpoleParams params;
  envs::Grid2 grid;
  EvalSettings settings;
  Eigen::VectorXd warm_v;  // reused across evaluations of a run

  // Returns total (undiscounted) reward of the greedy rollout from hanging rest.
  double evaluate(const tabular::TabularPosterior& post);
};

}  // namespace seedrl::harness
