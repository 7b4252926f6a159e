#include "seedrl/seed/ensemble.hpp"

namespace seedrl::seed {

void EnsembleConfig::validate() const {
  require(n_models >= 1, "EnsembleConfig: need at least one model");
  td.validate();
}

std::vector<int> ensemble_assign(int K, int E, Rng& rng) {
  require(K >= 1 && E >= 1, "ensemble_assign: K and E must be >= 1");
  std::vector<int> map(K);
  for (int k = 0; k < K; ++k) map[k] = rng.uniform_int(E);
  return map;
}

std::vector<EnsembleModel> make_ensemble(int E, const rvf::MlpShape& shape, double noise_var,
                                         double prior_scale, Rng& rng) {
  std::vector<EnsembleModel> models;
  models.reserve(E);
  for (int e = 0; e < E; ++e) {
    EnsembleModel m;
    m.seed.agent_id = e;
    m.seed.master = rng.next_u64();
    m.seed.noise_var = noise_var;
    Rng init = rng.fork(0x494e4954ULL + e);
    m.params = rvf::glorot_init(shape, init, prior_scale);
    models.push_back(std::move(m));
  }
  return models;
}

void ensemble_step(std::vector<EnsembleModel>& models, const BufferSnapshot& snap,
                   const EnsembleConfig& cfg, Rng& rng, const std::vector<int>* due) {
  cfg.validate();
  require(snap.size() > 0, "ensemble_step: buffer is empty");
  auto train = [&](int e) {
    require(e >= 0 && e < static_cast<int>(models.size()), "ensemble_step: bad model index");
    seed_td_update_mlp(models[e].params, snap, models[e].seed, cfg.td, rng, &models[e].adam);
  };
  if (due != nullptr) {
    for (int e : *due) train(e);
  } else {
    for (int e = 0; e < static_cast<int>(models.size()); ++e) train(e);
  }
}

}  // namespace seedrl::seed
