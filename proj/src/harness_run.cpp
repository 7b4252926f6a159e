#include <algorithm>
#include <cmath>

#include "harness_internal.hpp"

namespace seedrl::harness {

WorkerPool::WorkerPool(int n_threads) {
  require(n_threads >= 1, "WorkerPool: need at least one thread");
  workers_.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) workers_.emplace_back([this] { worker(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lk(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  for (auto& t : workers_) t.join();
}

void WorkerPool::run(int n_tasks, const std::function<void(int)>& fn) {
  if (n_tasks <= 0) return;
  std::unique_lock<std::mutex> lk(mu_);
  fn_ = &fn;
  next_ = 0;
  n_tasks_ = n_tasks;
  n_left_ = n_tasks;
  err_ = nullptr;
  ++gen_;
  cv_.notify_all();
  done_cv_.wait(lk, [this] { return n_left_ == 0; });
  fn_ = nullptr;
  if (err_) {
    auto e = err_;
    err_ = nullptr;
    lk.unlock();
    std::rethrow_exception(e);
  }
}

void WorkerPool::worker() {
  uint64_t seen = 0;
  std::unique_lock<std::mutex> lk(mu_);
  while (true) {
    cv_.wait(lk, [&] { return stop_ || gen_ != seen; });
    if (stop_) return;
    seen = gen_;
    while (next_ < n_tasks_) {
      const int i = next_++;
      lk.unlock();
      try {
        (*fn_)(i);
      } catch (...) {
        lk.lock();
        if (!err_) err_ = std::current_exception();
        if (--n_left_ == 0) done_cv_.notify_all();
        continue;
      }
      lk.lock();
      if (--n_left_ == 0) done_cv_.notify_all();
    }
  }
}

std::vector<std::pair<int, int>> group_events(const std::vector<Event>& ev, ScheduleKind kind,
                                              int threads, double window) {
  std::vector<std::pair<int, int>> groups;
  const int n = static_cast<int>(ev.size());
  int i = 0;
  while (i < n) {
    int j = i + 1;
    if (kind == ScheduleKind::kSynchronous) {
      while (j < n && ev[j].time == ev[i].time) ++j;
    } else if (threads > 1 && window > 0.0) {
      const double edge = (std::floor(ev[i].time / window) + 1.0) * window;
      while (j < n && ev[j].time <= edge) ++j;
    }
    groups.emplace_back(i, j);
    i = j;
  }
  return groups;
}

void run_two_phase(const std::vector<Event>& ev, const std::vector<std::pair<int, int>>& groups,
                   WorkerPool* pool, const std::function<void(int)>& act,
                   const std::function<void(int)>& commit,
                   const std::function<void(double)>& on_group_start) {
  std::vector<std::vector<int>> buckets;  // reused across groups
  for (const auto& [b, e] : groups) {
    if (on_group_start) on_group_start(ev[b].time);
    if (pool && e - b > 1) {
      buckets.clear();
      // One bucket per distinct agent, events kept in order.
      std::vector<int> owner;  // agent -> bucket id, lazily grown
      for (int i = b; i < e; ++i) {
        const int k = ev[i].agent;
        if (k >= static_cast<int>(owner.size())) owner.resize(k + 1, -1);
        if (owner[k] < 0) {
          owner[k] = static_cast<int>(buckets.size());
          buckets.emplace_back();
        }
        buckets[owner[k]].push_back(i);
      }
      pool->run(static_cast<int>(buckets.size()), [&](int t) {
        for (int i : buckets[t]) act(i);
      });
    } else {
      for (int i = b; i < e; ++i) act(i);
    }
    for (int i = b; i < e; ++i) commit(i);
  }
}

uint64_t env_stream_key(const RunConfig& cfg, int instance) {
  return key4(cfg.master_seed, static_cast<uint64_t>(cfg.K), static_cast<uint64_t>(instance),
              0x656e7669ULL);
}

uint64_t sched_stream_key(const RunConfig& cfg, int instance) {
  return key4(cfg.master_seed, static_cast<uint64_t>(cfg.K), static_cast<uint64_t>(instance),
              0x73636864ULL);
}

uint64_t algo_stream_key(const RunConfig& cfg, int instance) {
  const uint64_t base = key4(cfg.master_seed, static_cast<uint64_t>(cfg.K),
                             static_cast<uint64_t>(instance), 0x616c676fULL);
  return key2(base, static_cast<uint64_t>(cfg.algo));
}

const char* to_string(EnvKind e) {
  switch (e) {
    case EnvKind::kBipolar: return "bipolar";
    case EnvKind::kParallel: return "parallel";
    case EnvKind::kCartpole2: return "cartpole2";
    case EnvKind::kCartpole4: return "cartpole4";
  }
  return "?";
}

const char* to_string(AlgoKind a) {
  switch (a) {
    case AlgoKind::kPsrl: return "psrl";
    case AlgoKind::kUcrl: return "ucrl";
    case AlgoKind::kThompsonResample: return "thompson_resample";
    case AlgoKind::kSeedTabular: return "seed_tabular";
    case AlgoKind::kSeedLsvi: return "seed_lsvi";
    case AlgoKind::kSeedTd: return "seed_td";
    case AlgoKind::kSeedEnsemble: return "seed_ensemble";
    case AlgoKind::kEpsGreedyDqn: return "eps_greedy_dqn";
  }
  return "?";
}

void RunConfig::validate() const {
  require(K >= 1, "run config: K must be >= 1");
  require(threads >= 1, "run config: threads must be >= 1");
  require(kappa > 0.0, "run config: kappa must be positive");
  require(noise_var > 0.0, "run config: noise_var must be positive");
  require(prior_var > 0.0, "run config: prior_var must be positive");
  require(td_iters >= 1, "run config: td_iters must be >= 1");
  require(td_learning_rate > 0.0, "run config: td_learning_rate must be positive");
  require(td_discount >= 0.0 && td_discount < 1.0, "run config: td_discount must be in [0,1)");
  require(plan_discount > 0.0 && plan_discount < 1.0,
          "run config: plan_discount must be in (0,1)");
  require(buffer_capacity >= 0, "run config: buffer_capacity must be >= 0");
  require(epsilon >= 0.0 && epsilon <= 1.0, "run config: epsilon must be in [0,1]");
  require(ensemble_size >= 1, "run config: ensemble_size must be >= 1");
  require(minibatch >= 0, "run config: minibatch must be >= 0");

  const bool chain_env = env == EnvKind::kBipolar || env == EnvKind::kParallel;
  switch (algo) {
    case AlgoKind::kSeedLsvi:
    case AlgoKind::kSeedTd:
      require(chain_env, "run config: seed_lsvi/seed_td run on the chain environments");
      break;
    case AlgoKind::kSeedEnsemble:
    case AlgoKind::kEpsGreedyDqn:
      require(env == EnvKind::kCartpole4,
              "run config: seed_ensemble/eps_greedy_dqn run on the 4D cartpole");
      break;
    default:
      require(env != EnvKind::kCartpole4,
              "run config: the 4D cartpole supports seed_ensemble and eps_greedy_dqn");
      break;
  }
  if (buffer_capacity > 0)
    require(env == EnvKind::kCartpole4,
            "run config: capped buffers are supported on the 4D cartpole only");
  if (env == EnvKind::kBipolar) {
    require(bipolar_n >= 4 && bipolar_n % 2 == 0, "run config: bipolar_n must be even, >= 4");
  }
  if (env == EnvKind::kParallel) {
    require(parallel_chains >= 1 && parallel_length >= 1,
            "run config: parallel chain counts must be >= 1");
    require(parallel_sigma0_sq >= 0.0, "run config: parallel_sigma0_sq must be >= 0");
  }
  if (env == EnvKind::kCartpole2)
    require(grid_phi >= 1 && grid_phidot >= 1, "run config: grid dims must be >= 1");
}

RunMetrics run_concurrent(const RunConfig& cfg, int instance) {
  cfg.validate();
  switch (cfg.env) {
    case EnvKind::kBipolar:
    case EnvKind::kParallel: return run_chain(cfg, instance);
    case EnvKind::kCartpole2: return run_cartpole2(cfg, instance);
    case EnvKind::kCartpole4: return run_cartpole4(cfg, instance);
  }
  fail("run_concurrent: unknown environment");
}

}  // namespace seedrl::harness
