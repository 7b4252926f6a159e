#include <algorithm>
#include <cmath>
#include <memory>

#include "harness_internal.hpp"
#include "seedrl/envs/cartpole.hpp"
#include "seedrl/rvf/rvf.hpp"
#include "seedrl/seed/buffer.hpp"
#include "seedrl/seed/ensemble.hpp"

namespace seedrl::harness {
namespace {

struct Cp4Agent {
  envs::CartpoleState4 s;
  double reward = 0.0;
  Rng rng{0};              // epsilon-greedy draws
  seed::AgentSeed wseed;   // buffer-overwrite permutation stream (capped mode)
};

struct PendingT {
  bool valid = false;
  envs::Transition t;
};

int greedy_q_action(const rvf::MlpParams& params, const envs::CartpoleState4& s) {
  const Eigen::VectorXd q = rvf::q_eval(params, rvf::features_cartpole4(s));
  int best = 0;
  for (int a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = a;
  return best;
}

}  // namespace

RunMetrics run_cartpole4(const RunConfig& cfg, int instance) {
  const envs::CartpoleParams params = envs::CartpoleParams::continuous4d();
  const int A = static_cast<int>(params.force_set.size());
  const int horizon = cfg.horizon_actions > 0 ? cfg.horizon_actions : 3000;

  Rng sched_rng(sched_stream_key(cfg, instance));
  HorizonSpec hs;
  hs.actions_per_agent = horizon;
  hs.wall_clock = cfg.wall_clock;
  const Schedule sched = make_schedule(cfg.K, cfg.schedule, hs, cfg.kappa, sched_rng);
  const std::vector<Event> events = event_order(sched);
  const auto groups = group_events(events, cfg.schedule, cfg.threads, 0.25 / cfg.kappa);

  const bool dqn = cfg.algo == AlgoKind::kEpsGreedyDqn;
  const int E = dqn ? 1 : std::min(cfg.K, cfg.ensemble_size);
  const double eps = dqn ? (cfg.epsilon > 0.0 ? cfg.epsilon : 0.1) : cfg.epsilon;

  rvf::MlpShape shape;
  shape.in = 6;
  shape.out = A;
  const uint64_t algo_key = algo_stream_key(cfg, instance);
  Rng model_rng(key2(algo_key, 0x6d6f646cULL));
  // The epsilon-greedy baseline explores by dithering, not by seeds: no
  // perturbation noise and no prior network.
  std::vector<seed::EnsembleModel> models =
      seed::make_ensemble(E, shape, dqn ? 0.0 : cfg.mlp_noise_var,
                          dqn ? 0.0 : cfg.prior_scale, model_rng);
  for (auto& m : models) m.adam.learning_rate = cfg.mlp_learning_rate;

  Rng assign_rng(key2(algo_key, 0x61736767ULL));
  const std::vector<int> model_of = seed::ensemble_assign(cfg.K, E, assign_rng);

  seed::EnsembleConfig ens_cfg;
  ens_cfg.n_models = E;
  ens_cfg.td.sgd_iters = 1;
  ens_cfg.td.learning_rate = cfg.mlp_learning_rate;
  ens_cfg.td.discount = cfg.td_discount;
  ens_cfg.td.minibatch = cfg.minibatch;
  ens_cfg.td.noise_var = dqn ? 1.0 : cfg.mlp_noise_var;
  ens_cfg.td.prior_var = cfg.mlp_prior_var;
  ens_cfg.td.use_adam = true;

  const uint64_t env_key = env_stream_key(cfg, instance);
  std::vector<Cp4Agent> agents(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    Cp4Agent& ag = agents[k];
    double w[4];
    for (int c = 0; c < 4; ++c)
      w[c] = -0.05 + 0.1 * u01_from(key3(env_key, static_cast<uint64_t>(k), 10 + c));
    ag.s = envs::CartpoleState4{kPi + w[0], w[1], w[2], w[3]};
    ag.rng = Rng(key3(algo_key, static_cast<uint64_t>(k), 0x66726573ULL));
    ag.wseed.agent_id = k;
    ag.wseed.master = key3(algo_key, static_cast<uint64_t>(k), 0x77736564ULL);
  }

  seed::SharedBuffer buffer(cfg.buffer_capacity);
  Rng train_rng(key2(algo_key, 0x7472616eULL));
  std::vector<PendingT> pend(events.size());
  std::vector<std::pair<double, double>> team_curve;
  double team_total = 0.0;
  double next_curve = 100.0;

  auto act = [&](int i) {
    Cp4Agent& ag = agents[events[i].agent];
    const rvf::MlpParams& qnet = models[model_of[events[i].agent]].params;
    int a;
    if (eps > 0.0 && ag.rng.u01() < eps) {
      a = ag.rng.uniform_int(A);
    } else {
      a = greedy_q_action(qnet, ag.s);
    }
    PendingT& p = pend[i];
    p.valid = true;
    p.t.state = -1;
    p.t.action = a;
    p.t.agent_id = events[i].agent;
    p.t.s4 = {ag.s.phi, ag.s.phi_dot, ag.s.x, ag.s.x_dot};
    ag.s = envs::cartpole_step(ag.s, params.force_set[a], params);
    p.t.reward = envs::cartpole_reward4(ag.s);
    p.t.next_state = -1;
    p.t.next_terminal = false;  // continuing task
    p.t.next4 = {ag.s.phi, ag.s.phi_dot, ag.s.x, ag.s.x_dot};
    ag.reward += p.t.reward;
  };

  auto commit = [&](int i) {
    PendingT& p = pend[i];
    if (!p.valid) return;
    Cp4Agent& ag = agents[events[i].agent];
    buffer.append(p.t, &ag.wseed);
    team_total += p.t.reward;
    const std::vector<int> due{model_of[events[i].agent]};
    seed::ensemble_step(models, buffer.snapshot(), ens_cfg, train_rng, &due);
  };

  auto on_group_start = [&](double time) {
    while (time > next_curve) {
      team_curve.emplace_back(next_curve, team_total);
      next_curve += 100.0;
    }
  };

  WorkerPool* pool = nullptr;
  std::unique_ptr<WorkerPool> pool_holder;
  if (cfg.threads > 1) {
    pool_holder = std::make_unique<WorkerPool>(cfg.threads);
    pool = pool_holder.get();
  }
  run_two_phase(events, groups, pool, act, commit, on_group_start);
  team_curve.emplace_back(static_cast<double>(horizon), team_total);

  RunMetrics m;
  m.K = cfg.K;
  m.per_agent_reward.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) m.per_agent_reward[k] = agents[k].reward;
  m.mean_agent_reward = m.per_agent_reward.mean();
  m.team_total_reward = team_total;
  m.team_curve = std::move(team_curve);
  m.n_observations = buffer.total_appended();
  return m;
}

}  // namespace seedrl::harness
