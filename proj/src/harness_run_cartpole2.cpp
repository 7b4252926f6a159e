#include <algorithm>
#include <cmath>
#include <memory>

#include "harness_internal.hpp"
#include "seedrl/envs/cartpole.hpp"
#include "seedrl/seed/lsvi.hpp"
#include "seedrl/tabular/tabular.hpp"

namespace seedrl::harness {
namespace {

using tabular::MdpSample;

struct CpAgent {
  envs::CartpoleState2 s;
  double reward = 0.0;
  Rng rng{0};

  bool planned = false;      // PSRL: policy fixed after the first event
  std::vector<int> policy;

  Eigen::VectorXd V;         // warm start for per-event planning
  bool has_v = false;

  // Seed sampling: fixed randomness plus the incrementally maintained sampled
  // MDP (raw gamma partial sums and their row totals).
  tabular::TabularSeed tseed;
  std::vector<RowMat> gsum;
  std::vector<Eigen::ArrayXd> rowsum;
  MdpSample mdp;

  MdpSample scratch;  // Thompson / PSRL sampling target
};

struct PendingT {
  bool valid = false;
  envs::Transition t;
};

// Fresh posterior draw written into `out`. Distributionally identical to
// tabular::sample_mdp but vectorized for the alpha0 = 1 Dirichlet rows:
// unobserved cells are plain Exp(1) draws, observed cells get full gamma
// variates. `digest` supplies the observed cells per (s,a).
void fast_sample_mdp(const tabular::TabularPosterior& post, const seed::OnehotStats& digest,
                     Rng& rng, MdpSample& out, Eigen::ArrayXd& ubuf) {
  const int S = post.trans.S, A = post.trans.A;
  if (out.S != S) out = MdpSample(S, A);
  if (ubuf.size() != S) ubuf.resize(S);
  Eigen::ArrayXd row(S);
  for (int a = 0; a < A; ++a) {
    for (int s = 0; s < S; ++s) {
      for (int i = 0; i < S; ++i) ubuf[i] = rng.u01();
      row = -ubuf.log();
      for (const auto& [s2, cnt] : digest.next_counts[static_cast<size_t>(s) * A + a]) {
        row[s2] = tabular::gamma_draw(1.0 + cnt, rng);
      }
      out.P[a].row(s) = (row / row.sum()).matrix().transpose();
    }
  }
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a)
      out.R(s, a) = rng.normal(post.rew.mu(s, a), std::sqrt(post.rew.var(s, a)));
}

}  // namespace

RunMetrics run_cartpole2(const RunConfig& cfg, int instance) {
  const envs::CartpoleParams params = envs::CartpoleParams::tabular();
  const envs::Grid2 grid{cfg.grid_phi, cfg.grid_phidot};
  const int S = grid.n_states();
  const int A = static_cast<int>(params.force_set.size());
  const double T = cfg.wall_clock > 0.0 ? cfg.wall_clock : 1000.0;  // in env steps

  const uint64_t env_key = env_stream_key(cfg, instance);
  Rng sched_rng(sched_stream_key(cfg, instance));
  HorizonSpec hs;
  hs.actions_per_agent = cfg.horizon_actions;
  hs.wall_clock = T;
  const Schedule sched = make_schedule(cfg.K, cfg.schedule, hs, cfg.kappa, sched_rng);
  const std::vector<Event> events = event_order(sched);
  const auto groups = group_events(events, cfg.schedule, cfg.threads, 0.25 / cfg.kappa);

  tabular::TabularPosterior post(S, A);
  post.rew.obs_noise_var = cfg.reward_obs_var;
  seed::OnehotStats digest(S, A);  // sparse observed-cell digest

  tabular::ViOptions warm_opt;
  warm_opt.discount = cfg.plan_discount;
  warm_opt.span_tol = cfg.plan_span_tol;
  warm_opt.max_sweeps = cfg.plan_max_sweeps;
  tabular::ViOptions cold_opt = warm_opt;
  cold_opt.max_sweeps = cfg.plan_cold_sweeps;

  const uint64_t algo_key = algo_stream_key(cfg, instance);
  std::vector<CpAgent> agents(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    CpAgent& ag = agents[k];
    const double w1 = -0.05 + 0.1 * u01_from(key3(env_key, static_cast<uint64_t>(k), 1));
    const double w2 = -0.05 + 0.1 * u01_from(key3(env_key, static_cast<uint64_t>(k), 2));
    ag.s = envs::CartpoleState2{envs::wrap_angle(kPi + w1), w2};
    ag.rng = Rng(key3(algo_key, static_cast<uint64_t>(k), 0x66726573ULL));
    if (cfg.algo == AlgoKind::kSeedTabular) {
      ag.tseed.master = key3(algo_key, static_cast<uint64_t>(k), 0x73656564ULL);
      ag.tseed.S = S;
      ag.tseed.A = A;
      // Prior-state sample: every concentration is alpha0 = 1, i.e. one
      // Exp(1) term per cell, and rewards are prior draws.
      ag.gsum.assign(A, RowMat(S, S));
      ag.rowsum.assign(A, Eigen::ArrayXd(S));
      ag.mdp = MdpSample(S, A);
      for (int a = 0; a < A; ++a) {
        for (int s = 0; s < S; ++s) {
          double total = 0.0;
          for (int s2 = 0; s2 < S; ++s2) {
            const double g = ag.tseed.exp_at(s, a, s2, 0);
            ag.gsum[a](s, s2) = g;
            total += g;
          }
          ag.rowsum[a][s] = total;
          ag.mdp.P[a].row(s) = ag.gsum[a].row(s) / total;
        }
      }
      for (int s = 0; s < S; ++s)
        for (int a = 0; a < A; ++a)
          ag.mdp.R(s, a) = post.rew.mu(s, a) +
                           std::sqrt(post.rew.var(s, a)) * ag.tseed.gauss_at(s, a);
    }
  }

  // Concurrent-UCRL shared plan: every agent at the same information state
  // computes the same optimistic MDP, so one shared solve serves them all.
  struct UcrlShared {
    MdpSample opt;
    Eigen::MatrixXd radius;
    Eigen::VectorXd V;
    std::vector<int> policy;
    bool has_v = false;
    int64_t version = -1;
  } ucrl;

  auto ucrl_refresh = [&](int64_t version) {
    if (ucrl.version == version) return;
    ucrl.opt = tabular::optimistic_mdp(post, cfg.ucrl_delta);
    ucrl.radius = tabular::ucrl_l1_radius(post, cfg.ucrl_delta);
    tabular::ViOptions opt = ucrl.has_v ? warm_opt : cold_opt;
    opt.l1_radius = &ucrl.radius;
    if (ucrl.has_v) opt.warm_v = &ucrl.V;
    const auto res = tabular::value_iteration(ucrl.opt, opt);
    ucrl.V = res.V;
    ucrl.policy = res.policy;
    ucrl.has_v = true;
    ucrl.version = version;
  };

  Evaluator ev_state;
  ev_state.params = params;
  ev_state.grid = grid;
  ev_state.settings.horizon = cfg.eval_horizon;
  ev_state.settings.plan_discount = cfg.plan_discount;
  ev_state.settings.plan_span_tol = cfg.plan_span_tol;
  ev_state.settings.plan_max_sweeps = cfg.plan_cold_sweeps;
  std::vector<std::pair<double, double>> eval_curve;
  double next_eval =
      cfg.eval_every > 0.0 ? cfg.eval_every : std::numeric_limits<double>::infinity();

  std::vector<PendingT> pend(events.size());
  int64_t n_committed = 0;

  auto decide = [&](CpAgent& ag) -> int {
    const int cell = envs::discretize_cartpole(ag.s, grid);
    switch (cfg.algo) {
      case AlgoKind::kPsrl: {
        if (!ag.planned) {
          Eigen::ArrayXd ubuf;
          fast_sample_mdp(post, digest, ag.rng, ag.scratch, ubuf);
          ag.policy = tabular::value_iteration(ag.scratch, cold_opt).policy;
          ag.planned = true;
        }
        return ag.policy[cell];
      }
      case AlgoKind::kThompsonResample: {
        Eigen::ArrayXd ubuf;
        fast_sample_mdp(post, digest, ag.rng, ag.scratch, ubuf);
        tabular::ViOptions opt = ag.has_v ? warm_opt : cold_opt;
        if (ag.has_v) opt.warm_v = &ag.V;
        const auto res = tabular::value_iteration(ag.scratch, opt);
        ag.V = res.V;
        ag.has_v = true;
        return res.policy[cell];
      }
      case AlgoKind::kSeedTabular: {
        tabular::ViOptions opt = ag.has_v ? warm_opt : cold_opt;
        if (ag.has_v) opt.warm_v = &ag.V;
        const auto res = tabular::value_iteration(ag.mdp, opt);
        ag.V = res.V;
        ag.has_v = true;
        return res.policy[cell];
      }
      case AlgoKind::kUcrl: return ucrl.policy[cell];
      default: fail("run_cartpole2: unsupported algorithm");
    }
  };

  auto act = [&](int i) {
    CpAgent& ag = agents[events[i].agent];
    const int a = decide(ag);
    const double force = params.force_set[a];
    const int cell = envs::discretize_cartpole(ag.s, grid);
    ag.s = envs::cartpole_step(ag.s, force, params);
    const double r = envs::cartpole_reward2(ag.s, force);
    ag.reward += r;
    PendingT& p = pend[i];
    p.valid = true;
    p.t.state = cell;
    p.t.action = a;
    p.t.reward = r;
    p.t.next_state = envs::discretize_cartpole(ag.s, grid);
    p.t.next_terminal = false;
    p.t.agent_id = events[i].agent;
    p.t.s4 = {ag.s.phi, ag.s.phi_dot, 0.0, 0.0};
  };

  auto commit = [&](int i) {
    PendingT& p = pend[i];
    if (!p.valid) return;
    p.t.obs_index = n_committed++;
    post.update(p.t);
    digest.add(p.t);
    if (cfg.algo == AlgoKind::kSeedTabular) {
      const int s = p.t.state, a = p.t.action, s2 = p.t.next_state;
      const int pos = static_cast<int>(std::llround(post.trans.alpha[a](s, s2))) - 1;
      for (auto& ag : agents) {
        const double g = ag.tseed.exp_at(s, a, s2, pos);
        ag.gsum[a](s, s2) += g;
        ag.rowsum[a][s] += g;
        ag.mdp.P[a].row(s) = ag.gsum[a].row(s) / ag.rowsum[a][s];
        ag.mdp.R(s, a) = post.rew.mu(s, a) +
                         std::sqrt(post.rew.var(s, a)) * ag.tseed.gauss_at(s, a);
      }
    }
  };

  auto on_group_start = [&](double time) {
    while (time > next_eval) {
      eval_curve.emplace_back(next_eval, ev_state.evaluate(post));
      next_eval += cfg.eval_every;
    }
    if (cfg.algo == AlgoKind::kUcrl) ucrl_refresh(n_committed);
  };

  WorkerPool* pool = nullptr;
  std::unique_ptr<WorkerPool> pool_holder;
  if (cfg.threads > 1) {
    pool_holder = std::make_unique<WorkerPool>(cfg.threads);
    pool = pool_holder.get();
  }
  run_two_phase(events, groups, pool, act, commit, on_group_start);
  const double final_eval = ev_state.evaluate(post);
  eval_curve.emplace_back(T, final_eval);

  RunMetrics m;
  m.K = cfg.K;
  m.per_agent_reward.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) m.per_agent_reward[k] = agents[k].reward;
  m.mean_agent_reward = cfg.K > 0 ? m.per_agent_reward.mean() : kNan;
  m.eval_reward_final = final_eval;
  m.eval_curve = std::move(eval_curve);
  m.n_observations = n_committed;
  return m;
}

}  // namespace seedrl::harness
