#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "seedrl/envs/cartpole.hpp"
#include "seedrl/envs/chains.hpp"
#include "seedrl/harness/metrics.hpp"
#include "seedrl/harness/schedule.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::harness {

enum class EnvKind { kBipolar, kParallel, kCartpole2, kCartpole4 };
enum class AlgoKind {
  kPsrl,
  kUcrl,
  kThompsonResample,
  kSeedTabular,
  kSeedLsvi,
  kSeedTd,
  kSeedEnsemble,
  kEpsGreedyDqn
};

const char* to_string(EnvKind e);
const char* to_string(AlgoKind a);

// Everything needed to execute one concurrent run. The cli module assembles
// this from its flat config; defaults here are the benchmark settings.
struct RunConfig {
  EnvKind env = EnvKind::kBipolar;
  AlgoKind algo = AlgoKind::kSeedTabular;
  int K = 1;

  // Environment parameters.
  int bipolar_n = 50;
  int parallel_chains = 4;
  int parallel_length = 4;
  double parallel_sigma0_sq = 100.0;
  int grid_phi = 20;      // tabular cartpole discretization
  int grid_phidot = 20;

  // Schedule.
  ScheduleKind schedule = ScheduleKind::kPoisson;
  double kappa = 1.0;     // Poisson rate per environment step
  int horizon_actions = 0;   // 0 -> environment default
  double wall_clock = 0.0;   // 0 -> environment default

  // Shared-buffer capacity (0 = unbounded). Only the 4D cartpole algorithms
  // support a capped buffer.
  int64_t buffer_capacity = 0;

  // Seed LSVI / seed TD hyperparameters (chains).
  double noise_var = 0.01;   // v
  double prior_var = 100.0;  // lambda
  int lsvi_horizon = 0;      // 0 -> environment default
  double td_discount = 0.99;
  double td_learning_rate = 0.009;  // < noise_var keeps plain descent stable
  int td_iters = 2000;

  // Tabular algorithm hyperparameters.
  double ucrl_delta = 0.05;
  double plan_discount = 0.99;   // cartpole2 planning
  double plan_span_tol = 1e-6;
  int plan_max_sweeps = 200;     // per-event warm resume budget
  int plan_cold_sweeps = 2000;   // PSRL / evaluation cold solves
  double reward_obs_var = 1.0;   // Gaussian reward-noise model

  // Evaluation (cartpole2).
  int eval_horizon = 1000;
  double eval_every = 50.0;  // 0 disables intermediate evaluations

  // 4D cartpole hyperparameters.
  int ensemble_size = 30;      // E (capped at K)
  int minibatch = 16;
  double mlp_learning_rate = 1e-3;
  double mlp_noise_var = 0.01;
  double mlp_prior_var = 0.0;  // <= 0: no explicit anchor term (prior net only)
  double prior_scale = 3.0;
  double epsilon = 0.0;        // epsilon-greedy exploration (DQN preset: 0.1)

  // Execution.
  int threads = 1;           // 1 = deterministic reference event loop
  uint64_t master_seed = 1;  // combined with the instance index by sweep()

  bool operator==(const RunConfig&) const = default;
  void validate() const;
};

// Executes one run on a freshly drawn environment instance. Environment-side
// randomness (instance draw, schedule, start jitters) is derived only from
// (master_seed, K, instance), so algorithms compared at equal (seed, K,
// instance) face identical instances and arrival processes.
RunMetrics run_concurrent(const RunConfig& cfg, int instance);

// One long-format curve sample produced by sweep().
struct CurveRow {
  int K = 0;
  int instance = 0;
  std::string metric;
  double time_or_step = 0.0;
  double value = 0.0;
};

struct SweepResult {
  std::vector<int> k_values;
  std::vector<CurveRow> rows;
};

// Runs n_instances independent instances for each K, collecting long-format
// rows. `progress` (optional) is called after each completed run.
SweepResult sweep(const RunConfig& base, const std::vector<int>& k_values, int n_instances,
                  const std::function<void(int K, int instance, const RunMetrics&)>& progress =
                      nullptr);

// Aggregate (mean, standard error of the mean) of the final value of `metric`
// for a given K across instances in `rows`. SE is 0 for a single instance.
std::pair<double, double> aggregate_metric(const std::vector<CurveRow>& rows, int K,
                                           const std::string& metric);

}  // namespace seedrl::harness
