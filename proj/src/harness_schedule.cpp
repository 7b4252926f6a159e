#include "seedrl/harness/schedule.hpp"

#include <algorithm>

namespace seedrl::harness {

int64_t Schedule::n_events() const {
  int64_t n = 0;
  for (const auto& t : times) n += static_cast<int64_t>(t.size());
  return n;
}

Schedule make_schedule(int K, ScheduleKind kind, const HorizonSpec& horizon, double kappa,
                       Rng& rng) {
  require(K >= 1, "make_schedule: K must be >= 1");
  require(horizon.actions_per_agent > 0 || horizon.wall_clock > 0.0,
          "make_schedule: need an action budget or a wall clock (or both)");
  Schedule s;
  s.kind = kind;
  s.times.resize(K);
  if (kind == ScheduleKind::kSynchronous) {
    int H = horizon.actions_per_agent;
    if (H <= 0) H = static_cast<int>(horizon.wall_clock);
    if (horizon.wall_clock > 0.0 && horizon.actions_per_agent > 0)
      H = std::min(H, static_cast<int>(horizon.wall_clock));
    require(H >= 1, "make_schedule: synchronous horizon must be >= 1 tick");
    for (int k = 0; k < K; ++k) {
      s.times[k].resize(H);
      for (int t = 0; t < H; ++t) s.times[k][t] = static_cast<double>(t + 1);
    }
    return s;
  }
  require(kappa > 0.0, "make_schedule: Poisson rate must be positive");
  for (int k = 0; k < K; ++k) {
    double t = 0.0;
    auto& row = s.times[k];
    while (true) {
      if (horizon.actions_per_agent > 0 &&
          static_cast<int>(row.size()) >= horizon.actions_per_agent)
        break;
      t += rng.exp1() / kappa;
      if (horizon.wall_clock > 0.0 && t > horizon.wall_clock) break;
      row.push_back(t);
    }
  }
  return s;
}

std::vector<Event> event_order(const Schedule& s) {
  std::vector<Event> ev;
  ev.reserve(static_cast<size_t>(s.n_events()));
  for (int k = 0; k < s.n_agents(); ++k)
    for (int m = 0; m < static_cast<int>(s.times[k].size()); ++m)
      ev.push_back(Event{s.times[k][m], k, m});
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.agent < b.agent;
  });
  return ev;
}

}  // namespace seedrl::harness
