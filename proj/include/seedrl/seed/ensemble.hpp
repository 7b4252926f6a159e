#pragma once

#include "seedrl/seed/td.hpp"

namespace seedrl::seed {

struct EnsembleConfig {
  int n_models = 1;  // E
  SeedTdConfig td;

  void validate() const;
};

// Each agent draws one model index uniformly at creation; fixed thereafter.
std::vector<int> ensemble_assign(int K, int E, Rng& rng);

// A trained ensemble member: its own fixed noise stream z_{e,.}, parameters,
// and optimizer state.
struct EnsembleModel {
  AgentSeed seed;
  rvf::MlpParams params;
  rvf::AdamState adam;
};

std::vector<EnsembleModel> make_ensemble(int E, const rvf::MlpShape& shape, double noise_var,
                                         double prior_scale, Rng& rng);

// One seed_td_update per listed model (all models when due == nullptr).
void ensemble_step(std::vector<EnsembleModel>& models, const BufferSnapshot& snap,
                   const EnsembleConfig& cfg, Rng& rng, const std::vector<int>* due = nullptr);

}  // namespace seedrl::seed
