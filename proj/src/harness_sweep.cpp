#include <cmath>
#include <map>

#include "seedrl/harness/run.hpp"

namespace seedrl::harness {
namespace {

void append_rows(std::vector<CurveRow>& rows, const RunConfig& cfg, int instance,
                 const RunMetrics& m) {
  auto push = [&](const std::string& metric, double t, double v) {
    rows.push_back(CurveRow{cfg.K, instance, metric, t, v});
  };
  switch (cfg.env) {
    case EnvKind::kBipolar:
    case EnvKind::kParallel: {
      const int budget = cfg.horizon_actions > 0
                             ? cfg.horizon_actions
                             : (cfg.env == EnvKind::kBipolar ? 2 * cfg.bipolar_n
                                                             : cfg.parallel_length);
      push("mean_regret_per_agent", budget, m.mean_regret_per_agent);
      push("mean_agent_reward", budget, m.mean_agent_reward);
      break;
    }
    case EnvKind::kCartpole2: {
      for (const auto& [t, v] : m.eval_curve) push("eval_reward", t, v);
      if (!m.eval_curve.empty())
        push("mean_agent_reward", m.eval_curve.back().first, m.mean_agent_reward);
      break;
    }
    case EnvKind::kCartpole4: {
      for (const auto& [t, v] : m.team_curve) push("team_cum_reward", t, v);
      const double t_final = m.team_curve.empty() ? 0.0 : m.team_curve.back().first;
      push("team_total_reward", t_final, m.team_total_reward);
      break;
    }
  }
}

}  // namespace

SweepResult sweep(const RunConfig& base, const std::vector<int>& k_values, int n_instances,
                  const std::function<void(int, int, const RunMetrics&)>& progress) {
  require(!k_values.empty(), "sweep: need at least one K");
  require(n_instances >= 1, "sweep: need at least one instance");
  SweepResult out;
  out.k_values = k_values;
  for (int K : k_values) {
    RunConfig cfg = base;
    cfg.K = K;
    cfg.validate();
    for (int inst = 0; inst < n_instances; ++inst) {
      RunMetrics m = run_concurrent(cfg, inst);
      append_rows(out.rows, cfg, inst, m);
      if (progress) progress(K, inst, m);
    }
  }
  return out;
}

std::pair<double, double> aggregate_metric(const std::vector<CurveRow>& rows, int K,
                                           const std::string& metric) {
  // Final (latest-time) value of the metric per instance.
  std::map<int, std::pair<double, double>> latest;  // instance -> (time, value)
  for (const CurveRow& r : rows) {
    if (r.K != K || r.metric != metric) continue;
    auto it = latest.find(r.instance);
    if (it == latest.end() || r.time_or_step >= it->second.first)
      latest[r.instance] = {r.time_or_step, r.value};
  }
  require(!latest.empty(), "aggregate_metric: no rows match K=" + std::to_string(K) + " metric=" +
                               metric);
  const int n = static_cast<int>(latest.size());
  double mean = 0.0;
  for (const auto& [inst, tv] : latest) mean += tv.second;
  mean /= n;
  double se = 0.0;
  if (n > 1) {
    double ss = 0.0;
    for (const auto& [inst, tv] : latest) ss += (tv.second - mean) * (tv.second - mean);
    se = std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n));
  }
  return {mean, se};
}

}  // namespace seedrl::harness
