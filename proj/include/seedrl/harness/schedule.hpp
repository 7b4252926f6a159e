#pragma once

#include <vector>

#include "seedrl/common.hpp"
#include "seedrl/rng.hpp"

namespace seedrl::harness {

enum class ScheduleKind { kSynchronous, kPoisson };

// Either a per-agent action budget, a wall-clock truncation, or both.
struct HorizonSpec {
  int actions_per_agent = 0;  // > 0 to enable
  double wall_clock = 0.0;    // > 0 to enable
};

struct Schedule {
  ScheduleKind kind = ScheduleKind::kSynchronous;
  std::vector<std::vector<double>> times;  // per agent, strictly increasing

  int n_agents() const { return static_cast<int>(times.size()); }
  int64_t n_events() const;
};

// Synchronous: every agent acts at ticks 1..H. Poisson: i.i.d. Exp(kappa)
// inter-arrivals per agent, cut off at the action budget and/or wall clock.
Schedule make_schedule(int K, ScheduleKind kind, const HorizonSpec& horizon, double kappa,
                       Rng& rng);

struct Event {
  double time = 0.0;
  int agent = 0;
  int m = 0;  // ordinal of this agent's action (0-based)
};

// Global time order; simultaneous events (synchronous ticks) keep agent order.
std::vector<Event> event_order(const Schedule& s);

}  // namespace seedrl::harness
