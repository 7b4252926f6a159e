#pragma once

#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/envs/transition.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::tabular {

// Dirichlet over next states, one concentration row per (s,a).
struct DirichletPosterior {
  int S = 0;
  int A = 0;
  double alpha0 = 1.0;
  std::vector<RowMat> alpha;  // per action: S x S
  Eigen::MatrixXd n;          // observation counts per (s,a)

  DirichletPosterior() = default;
  DirichletPosterior(int S_, int A_, double alpha0_ = 1.0);
  void update(int s, int a, int s_next);
};

struct GaussianRewardPosterior {
  Eigen::MatrixXd mu;   // S x A
  Eigen::MatrixXd var;  // S x A
  double obs_noise_var = 1.0;

  GaussianRewardPosterior() = default;
  GaussianRewardPosterior(int S, int A, double mu0 = 0.0, double var0 = 1.0,
                          double obs_noise_var_ = 1.0);
  void update(int s, int a, double r);
};

struct TabularPosterior {
  DirichletPosterior trans;
  GaussianRewardPosterior rew;

  TabularPosterior() = default;
  TabularPosterior(int S, int A);
  void update(const envs::Transition& t);
};

void update_transition(DirichletPosterior& post, const envs::Transition& t);
void update_reward(GaussianRewardPosterior& post, const envs::Transition& t);

struct MdpSample {
  int S = 0;
  int A = 0;
  std::vector<RowMat> P;  // per action: S x S, rows sum to 1
  Eigen::MatrixXd R;      // S x A

  MdpSample() = default;
  MdpSample(int S_, int A_);
  void validate(double tol = 1e-9) const;
};

// Per-agent fixed randomness for tabular seed sampling: an unbounded Exp(1)
// stream per (s,a,s') and one N(0,1) draw per (s,a), all counter-hashed from
// the master seed, so re-reading any position returns the same value.
struct TabularSeed {
  uint64_t master = 0;
  int S = 0;
  int A = 0;

  double exp_at(int s, int a, int s_next, int pos) const {
    return exp1_from(key4(master, cell(s, a, s_next), static_cast<uint64_t>(pos), 0x45585031ULL));
  }
  double gauss_at(int s, int a) const {
    return normal_from(key3(master, static_cast<uint64_t>(s) * A + a, 0x47415553ULL));
  }

 private:
  uint64_t cell(int s, int a, int s_next) const {
    return (static_cast<uint64_t>(s) * A + a) * S + s_next;
  }
};

// Fresh independent posterior draw (Thompson resampling; PSRL's single draw).
MdpSample sample_mdp(const TabularPosterior& post, Rng& rng);

// Deterministic map (posterior, seed) -> MDP: gamma variates as partial sums
// of the agent's Exp(1) streams, rewards via the fixed standard-normal draws.
// Requires integer concentrations.
MdpSample seed_sample_mdp(const TabularPosterior& post, const TabularSeed& seed);

// Posterior-mean transitions plus UCB rewards mu + sqrt(2 log(1/delta) var).
// Transition optimism is applied inside the planner via l1 radii.
MdpSample optimistic_mdp(const TabularPosterior& post, double delta);

// L1 confidence radii sqrt(2 (S log 2 + log(1/delta)) / max(1, n(s,a))).
Eigen::MatrixXd ucrl_l1_radius(const TabularPosterior& post, double delta);

MdpSample expected_mdp(const TabularPosterior& post);

// Gamma(shape, 1) variate; Marsaglia-Tsang, deterministic given the rng.
double gamma_draw(double shape, Rng& rng);

struct ViOptions {
  int horizon = 0;          // > 0: finite-horizon backups (ignores discount)
  double discount = 0.0;    // in [0,1) when horizon == 0
  double span_tol = 1e-9;
  int max_sweeps = 1000000;
  const Eigen::MatrixXd* l1_radius = nullptr;   // UCRL transition optimism
  const Eigen::VectorXd* warm_v = nullptr;      // warm start (discounted mode)
  bool validate = true;
};

struct ViResult {
  Eigen::MatrixXd Q;        // S x A
  Eigen::VectorXd V;        // per state
  std::vector<int> policy;  // argmax, ties toward the lowest action index
  int sweeps = 0;
};

ViResult value_iteration(const MdpSample& mdp, const ViOptions& opt);

}  // namespace seedrl::tabular
