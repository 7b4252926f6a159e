#pragma once

#include <atomic>
#include <condition_variable>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "seedrl/harness/run.hpp"
#include "seedrl/harness/schedule.hpp"

namespace seedrl::harness {

// Persistent worker threads; run() executes fn(0..n_tasks-1) and blocks until
// all complete. Exceptions from tasks are rethrown on the calling thread.
class WorkerPool {
 public:
  explicit WorkerPool(int n_threads);
  ~WorkerPool();
  void run(int n_tasks, const std::function<void(int)>& fn);

 private:
  void worker();

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  const std::function<void(int)>* fn_ = nullptr;
  int next_ = 0;
  int n_tasks_ = 0;
  int n_left_ = 0;
  uint64_t gen_ = 0;
  bool stop_ = false;
  std::exception_ptr err_;
};

// Partition the event stream into commit groups: synchronous runs group by
// tick; the single-threaded Poisson loop uses singletons (exact reference
// semantics); the threaded Poisson loop batches a fixed-width time window.
std::vector<std::pair<int, int>> group_events(const std::vector<Event>& ev, ScheduleKind kind,
                                              int threads, double window);

// Two-phase execution: within a group, every agent first acts from the frozen
// pre-group shared state (act may be dispatched across the pool, one task per
// agent, an agent's own events stay ordered); then commits run sequentially
// in event order. on_group_start (optional) runs single-threaded before each
// group with the group's first event time — used for evaluation snapshots and
// shared-plan refreshes.
void run_two_phase(const std::vector<Event>& ev, const std::vector<std::pair<int, int>>& groups,
                   WorkerPool* pool, const std::function<void(int)>& act,
                   const std::function<void(int)>& commit,
                   const std::function<void(double)>& on_group_start = nullptr);

// Instance-key derivation. Environment-side streams (tag "env", "sched") do
// not depend on the algorithm, so paired comparisons face identical
// instances; algorithm-side streams mix the algorithm id in.
uint64_t env_stream_key(const RunConfig& cfg, int instance);
uint64_t sched_stream_key(const RunConfig& cfg, int instance);
uint64_t algo_stream_key(const RunConfig& cfg, int instance);

// Shared entry points implemented per environment family.
RunMetrics run_chain(const RunConfig& cfg, int instance);
RunMetrics run_cartpole2(const RunConfig& cfg, int instance);
RunMetrics run_cartpole4(const RunConfig& cfg, int instance);

}  // namespace seedrl::harness
