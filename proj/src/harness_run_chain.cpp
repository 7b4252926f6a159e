#include <algorithm>
#include <cmath>
#include <memory>

#include "harness_internal.hpp"
#include "seedrl/envs/chains.hpp"
#include "seedrl/seed/buffer.hpp"
#include "seedrl/seed/lsvi.hpp"
#include "seedrl/seed/td.hpp"
#include "seedrl/tabular/chain_beliefs.hpp"

namespace seedrl::harness {
namespace {

struct ChainAgent {
  int pos = 0;
  bool done = false;
  double reward = 0.0;

  // Tabular-algorithm randomness: u (bipolar) and xi (parallel) are the fixed
  // seed draws; rng backs fresh sampling for Thompson/PSRL.
  double u = 0.0;
  Eigen::VectorXd xi;
  Rng rng{0};
  bool psrl_planned = false;
  int psrl_act = 0;  // bipolar: walk direction; parallel: chain id

  // Value-function agents.
  seed::AgentSeed seed;
  seed::AgentZsums zsums;
  Eigen::VectorXd theta;

};

// Phase-1 result for one event, consumed by the commit phase. Indexed by
// event so an agent with several events in one threaded window loses nothing.
struct Pending {
  bool valid = false;
  envs::Transition t;
  bool reveal = false;
  double reveal_theta_r = 0.0;  // bipolar
  int reveal_chain = -1;        // parallel
  double reveal_theta = 0.0;    // parallel
};

}  // namespace

RunMetrics run_chain(const RunConfig& cfg, int instance) {
  const bool bip_env = cfg.env == EnvKind::kBipolar;

  // Environment instance (algorithm-independent stream).
  Rng env_rng(env_stream_key(cfg, instance));
  envs::ChainSpec bip;
  envs::ParallelChainsSpec par;
  int S = 0, A = 0, budget = 0, start = 0;
  if (bip_env) {
    bip = envs::ChainSpec::make(cfg.bipolar_n, env_rng.u01() < 0.5);
    S = bip.n_vertices;
    A = 2;
    budget = cfg.horizon_actions > 0 ? cfg.horizon_actions : 2 * bip.n_vertices;
    start = bip.start_vertex;
  } else {
    par = envs::ParallelChainsSpec::sample(cfg.parallel_chains, cfg.parallel_length,
                                           cfg.parallel_sigma0_sq, env_rng);
    S = par.n_states();
    A = par.n_chains;
    budget = cfg.horizon_actions > 0 ? cfg.horizon_actions : par.chain_length;
    start = 0;
  }

  Rng sched_rng(sched_stream_key(cfg, instance));
  HorizonSpec hs;
  hs.actions_per_agent = budget;
  hs.wall_clock = cfg.wall_clock;
  const Schedule sched = make_schedule(cfg.K, cfg.schedule, hs, cfg.kappa, sched_rng);
  const std::vector<Event> events = event_order(sched);
  const auto groups =
      group_events(events, cfg.schedule, cfg.threads, 0.25 / cfg.kappa);

  // Shared learning state.
  seed::SharedBuffer buffer(0);
  seed::OnehotStats stats(S, A);
  tabular::BipolarBelief bip_belief;
  tabular::ParallelBelief par_belief(bip_env ? envs::ParallelChainsSpec{} : par);
  seed::LinearFamily fam = seed::LinearFamily::make_one_hot(S, A);
  if (!bip_env) {
    const envs::ParallelChainsSpec spec = par;
    fam.legal_mask = [spec](int s) -> uint32_t {
      return spec.is_source(s) ? ((1u << spec.n_chains) - 1u) : 1u;
    };
  }

  const bool value_agent = cfg.algo == AlgoKind::kSeedLsvi || cfg.algo == AlgoKind::kSeedTd;
  seed::SeedLsviConfig lsvi_cfg;
  lsvi_cfg.planning_horizon =
      cfg.lsvi_horizon > 0 ? cfg.lsvi_horizon : (bip_env ? S : par.chain_length + 1);
  lsvi_cfg.reg.noise_var = cfg.noise_var;
  lsvi_cfg.reg.prior_var = cfg.prior_var;
  seed::SeedTdConfig td_cfg;
  td_cfg.sgd_iters = cfg.td_iters;
  td_cfg.learning_rate = cfg.td_learning_rate;
  td_cfg.discount = cfg.td_discount;
  td_cfg.minibatch = 0;
  td_cfg.noise_var = cfg.noise_var;
  td_cfg.prior_var = cfg.prior_var;
  // Plain descent: on the one-hot mean loss the per-cell contraction factor
  // is lr * (2/v) * (cell's data share), so any lr < v converges; Adam's
  // non-vanishing steps would instead leave residual oscillation that the
  // max-bootstrap turns into runaway value inflation.
  td_cfg.use_adam = false;

  const uint64_t algo_key = algo_stream_key(cfg, instance);
  std::vector<ChainAgent> agents(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    ChainAgent& ag = agents[k];
    ag.pos = start;
    ag.rng = Rng(key3(algo_key, static_cast<uint64_t>(k), 0x66726573ULL));
    if (cfg.algo == AlgoKind::kSeedTabular) {
      if (bip_env) {
        ag.u = u01_from(key3(algo_key, static_cast<uint64_t>(k), 0x75626970ULL));
      } else {
        ag.xi.resize(A);
        for (int c = 0; c < A; ++c)
          ag.xi[c] = normal_from(key4(algo_key, static_cast<uint64_t>(k),
                                      static_cast<uint64_t>(c), 0x78697061ULL));
      }
    }
    if (value_agent) {
      const uint64_t master = key3(algo_key, static_cast<uint64_t>(k), 0x73656564ULL);
      ag.seed = seed::make_agent_seed(k, master, fam.dim(), cfg.prior_var, cfg.noise_var);
      ag.zsums = seed::AgentZsums(S, A);
      if (cfg.algo == AlgoKind::kSeedTd) {
        ag.theta = ag.seed.theta_hat;
      }
    }
  }

  auto bipolar_decide = [&](ChainAgent& ag) -> int {
    switch (cfg.algo) {
      case AlgoKind::kSeedTabular:
        return tabular::bipolar_walk_action(bip_belief.sample_right_positive(ag.u));
      case AlgoKind::kThompsonResample:
        return tabular::bipolar_walk_action(bip_belief.sample_right_positive(ag.rng.u01()));
      case AlgoKind::kPsrl:
        if (!ag.psrl_planned) {
          ag.psrl_act =
              tabular::bipolar_walk_action(bip_belief.sample_right_positive(ag.rng.u01()));
          ag.psrl_planned = true;
        }
        return ag.psrl_act;
      case AlgoKind::kUcrl:
        // Pre-revelation, both endpoint rewards are optimistically +N and the
        // right endpoint is one step closer from N/2, so the optimistic plan
        // walks right; afterwards, walk toward the known positive end.
        if (!bip_belief.revealed) return tabular::bipolar_walk_action(true);
        return tabular::bipolar_walk_action(bip_belief.right_positive);
      case AlgoKind::kSeedLsvi: {
        ag.zsums.catch_up(buffer.snapshot(), ag.seed);
        ag.theta = seed::lsvi_onehot(stats, ag.zsums, ag.seed, fam, lsvi_cfg);
        return seed::greedy_action(ag.theta, fam, ag.pos);
      }
      case AlgoKind::kSeedTd: {
        ag.zsums.catch_up(buffer.snapshot(), ag.seed);
        ag.theta = seed::td_onehot(ag.theta, stats, ag.zsums, ag.seed, fam, td_cfg, nullptr);
        return seed::greedy_action(ag.theta, fam, ag.pos);
      }
      default: fail("run_chain: unsupported algorithm");
    }
  };

  auto parallel_decide = [&](ChainAgent& ag) -> int {
    if (!par.is_source(ag.pos)) {
      // Committed to a chain: advancing is the only legal move, but the
      // TD learner still takes its gradient iterations on the shared data.
      if (cfg.algo == AlgoKind::kSeedTd) {
        ag.zsums.catch_up(buffer.snapshot(), ag.seed);
        ag.theta = seed::td_onehot(ag.theta, stats, ag.zsums, ag.seed, fam, td_cfg, nullptr);
      }
      return 0;
    }
    Eigen::VectorXd vals(A);
    switch (cfg.algo) {
      case AlgoKind::kSeedTabular:
        for (int c = 0; c < A; ++c) vals[c] = par_belief.sample(c, ag.xi[c]);
        return tabular::argmax_low(vals);
      case AlgoKind::kThompsonResample:
        for (int c = 0; c < A; ++c) vals[c] = par_belief.sample(c, ag.rng.normal());
        return tabular::argmax_low(vals);
      case AlgoKind::kPsrl:
        if (!ag.psrl_planned) {
          for (int c = 0; c < A; ++c) vals[c] = par_belief.sample(c, ag.rng.normal());
          ag.psrl_act = tabular::argmax_low(vals);
          ag.psrl_planned = true;
        }
        return ag.psrl_act;
      case AlgoKind::kUcrl:
        for (int c = 0; c < A; ++c)
          vals[c] = par_belief.known[c] ? par_belief.mu[c] : par_belief.ucb(c, cfg.ucrl_delta);
        return tabular::argmax_low(vals);
      case AlgoKind::kSeedLsvi: {
        ag.zsums.catch_up(buffer.snapshot(), ag.seed);
        ag.theta = seed::lsvi_onehot(stats, ag.zsums, ag.seed, fam, lsvi_cfg);
        return seed::greedy_action(ag.theta, fam, ag.pos);
      }
      case AlgoKind::kSeedTd: {
        ag.zsums.catch_up(buffer.snapshot(), ag.seed);
        ag.theta = seed::td_onehot(ag.theta, stats, ag.zsums, ag.seed, fam, td_cfg, nullptr);
        return seed::greedy_action(ag.theta, fam, ag.pos);
      }
      default: fail("run_chain: unsupported algorithm");
    }
  };

  std::vector<Pending> pend(events.size());

  auto act = [&](int i) {
    ChainAgent& ag = agents[events[i].agent];
    if (ag.done) return;
    Pending& p = pend[i];
    p.valid = true;
    p.t.state = ag.pos;
    p.t.agent_id = events[i].agent;
    if (bip_env) {
      const int a = bipolar_decide(ag);
      const auto r = envs::bipolar_step(ag.pos, a, bip);
      p.t.action = a;
      p.t.reward = r.reward;
      p.t.next_state = r.next_vertex;
      p.t.next_terminal = r.terminal;
      ag.pos = r.next_vertex;
      ag.done = r.terminal;
      ag.reward += r.reward;
      if (r.reveal) {
        p.reveal = true;
        p.reveal_theta_r = r.theta_R;
      }
    } else {
      const int a = parallel_decide(ag);
      const auto r = envs::parallel_step(ag.pos, a, par);
      p.t.action = a;
      p.t.reward = r.reward;
      p.t.next_state = r.next_node;
      p.t.next_terminal = r.terminal;
      ag.pos = r.next_node;
      ag.done = r.terminal;
      ag.reward += r.reward;
      if (r.reveal) {
        p.reveal = true;
        p.reveal_chain = r.chain;
        p.reveal_theta = r.theta;
      }
    }
  };

  auto commit = [&](int i) {
    Pending& p = pend[i];
    if (!p.valid) return;
    buffer.append(p.t);
    if (p.reveal) {
      if (bip_env) {
        if (!bip_belief.revealed) {
          bip_belief.reveal(p.reveal_theta_r);
          // The endpoint arrival reveals both theta values; value-function
          // agents receive the unvisited endpoint edge as a synthetic
          // observation so both extremes are represented in the store.
          envs::Transition syn;
          syn.agent_id = -1;
          if (p.t.next_state == 0) {  // absorbed left; mirror edge is (N-2, right)
            syn.state = bip.n_vertices - 2;
            syn.action = 1;
            syn.reward = bip.theta_R;
            syn.next_state = bip.n_vertices - 1;
          } else {  // absorbed right; mirror edge is (1, left)
            syn.state = 1;
            syn.action = 0;
            syn.reward = bip.theta_L;
            syn.next_state = 0;
          }
          syn.next_terminal = true;
          buffer.append(syn);
        }
      } else {
        par_belief.observe(p.reveal_chain, p.reveal_theta);
      }
    }
    if (value_agent) stats.catch_up(buffer.snapshot());
  };

  WorkerPool* pool = nullptr;
  std::unique_ptr<WorkerPool> pool_holder;
  if (cfg.threads > 1) {
    pool_holder = std::make_unique<WorkerPool>(cfg.threads);
    pool = pool_holder.get();
  }
  run_two_phase(events, groups, pool, act, commit);

  RunMetrics m;
  m.K = cfg.K;
  m.per_agent_reward.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) m.per_agent_reward[k] = agents[k].reward;
  m.mean_agent_reward = m.per_agent_reward.mean();
  m.optimal_value =
      bip_env ? bipolar_optimal_value(bip, budget) : parallel_optimal_value(par);
  m.mean_regret_per_agent = m.optimal_value - m.mean_agent_reward;
  m.n_observations = buffer.total_appended();
  return m;
}

}  // namespace seedrl::harness
