#include <charconv>
#include <map>
#include <sstream>

#include "cli_internal.hpp"
#include "seedrl/cli/cli.hpp"

namespace seedrl::cli {

using harness::AlgoKind;
using harness::EnvKind;
using harness::ScheduleKind;

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

namespace {

long long to_ll(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    fail("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  require(pos == v.size(), "config key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

}  // namespace

int to_int(const std::string& key, const std::string& v) {
  long long x = to_ll(key, v);
  require(x >= INT32_MIN && x <= INT32_MAX, "config key '" + key + "': value out of range");
  return static_cast<int>(x);
}

int64_t to_i64(const std::string& key, const std::string& v) { return to_ll(key, v); }

uint64_t to_u64(const std::string& key, const std::string& v) {
  size_t pos = 0;
  uint64_t x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    fail("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
  require(pos == v.size(),
          "config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  return x;
}

double to_dbl(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail("config key '" + key + "': expected a number, got '" + v + "'");
  }
  require(pos == v.size(), "config key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
  require(!out.empty(), "config key '" + key + "': expected a comma-separated integer list");
  return out;
}

EnvKind env_from_string(const std::string& s) {
  if (s == "bipolar") return EnvKind::kBipolar;
  if (s == "parallel") return EnvKind::kParallel;
  if (s == "cartpole2") return EnvKind::kCartpole2;
  if (s == "cartpole4") return EnvKind::kCartpole4;
  fail("unknown env name '" + s + "' (expected bipolar|parallel|cartpole2|cartpole4)");
}

AlgoKind algo_from_string(const std::string& s) {
  if (s == "psrl") return AlgoKind::kPsrl;
  if (s == "ucrl") return AlgoKind::kUcrl;
  if (s == "thompson_resample") return AlgoKind::kThompsonResample;
  if (s == "seed_tabular") return AlgoKind::kSeedTabular;
  if (s == "seed_lsvi") return AlgoKind::kSeedLsvi;
  if (s == "seed_td") return AlgoKind::kSeedTd;
  if (s == "seed_ensemble") return AlgoKind::kSeedEnsemble;
  if (s == "eps_greedy_dqn") return AlgoKind::kEpsGreedyDqn;
  fail("unknown algorithm name '" + s +
       "' (expected psrl|ucrl|thompson_resample|seed_tabular|seed_lsvi|seed_td|"
       "seed_ensemble|eps_greedy_dqn)");
}

ScheduleKind schedule_from_string(const std::string& s) {
  if (s == "synchronous") return ScheduleKind::kSynchronous;
  if (s == "poisson") return ScheduleKind::kPoisson;
  fail("unknown schedule name '" + s + "' (expected synchronous|poisson)");
}

const char* to_string(ScheduleKind k) {
  return k == ScheduleKind::kSynchronous ? "synchronous" : "poisson";
}

void ExperimentConfig::validate() const {
  run.validate();
  require(!k_values.empty(), "config: k_values must be nonempty");
  for (int k : k_values) require(k >= 1, "config: k_values entries must be >= 1");
  require(n_instances >= 1, "config: n_instances must be >= 1");
  require(!output.empty(), "config: output must be nonempty");
}

ExperimentConfig default_config(EnvKind env, AlgoKind algo) {
  ExperimentConfig cfg;
  cfg.run.env = env;
  cfg.run.algo = algo;
  switch (env) {
    case EnvKind::kBipolar:
    case EnvKind::kParallel:
      cfg.k_values = {1, 10, 100};
      cfg.n_instances = 100;
      break;
    case EnvKind::kCartpole2:
      cfg.k_values = {1, 4, 16, 64};
      cfg.n_instances = 10;
      break;
    case EnvKind::kCartpole4:
      cfg.k_values = {30};
      cfg.n_instances = 10;
      cfg.run.schedule = ScheduleKind::kSynchronous;
      break;
  }
  if (algo == AlgoKind::kEpsGreedyDqn) {
    // Epsilon-greedy baseline preset: a single model, uniform dithering.
    cfg.run.ensemble_size = 1;
    cfg.run.epsilon = 0.1;
  }
  cfg.run.K = cfg.k_values.front();
  return cfg;
}

namespace {

struct FieldDef {
  const char* key;
  void (*set)(ExperimentConfig&, const std::string& key, const std::string& value);
  std::string (*get)(const ExperimentConfig&);
};

#define INT_FIELD(name, member)                                                          \
  FieldDef {                                                                             \
    name,                                                                                \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {            \
          c.member = to_int(k, v);                                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }               \
  }
#define I64_FIELD(name, member)                                                          \
  FieldDef {                                                                             \
    name,                                                                                \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {            \
          c.member = to_i64(k, v);                                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }               \
  }
#define U64_FIELD(name, member)                                                          \
  FieldDef {                                                                             \
    name,                                                                                \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {            \
          c.member = to_u64(k, v);                                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }               \
  }
#define DBL_FIELD(name, member)                                                          \
  FieldDef {                                                                             \
    name,                                                                                \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {            \
          c.member = to_dbl(k, v);                                                       \
        },                                                                               \
        [](const ExperimentConfig& c) { return fmt_double(c.member); }                   \
  }

const FieldDef kFields[] = {
    {"env",
     [](ExperimentConfig& c, const std::string&, const std::string& v) {
       c.run.env = env_from_string(v);
     },
     [](const ExperimentConfig& c) { return std::string(harness::to_string(c.run.env)); }},
    {"algorithm",
     [](ExperimentConfig& c, const std::string&, const std::string& v) {
       c.run.algo = algo_from_string(v);
     },
     [](const ExperimentConfig& c) { return std::string(harness::to_string(c.run.algo)); }},
    {"k_values",
     [](ExperimentConfig& c, const std::string& k, const std::string& v) {
       c.k_values = to_int_list(k, v);
     },
     [](const ExperimentConfig& c) {
       std::string s;
       for (size_t i = 0; i < c.k_values.size(); ++i) {
         if (i) s += ',';
         s += std::to_string(c.k_values[i]);
       }
       return s;
     }},
    INT_FIELD("n_instances", n_instances),
    U64_FIELD("master_seed", run.master_seed),
    INT_FIELD("threads", run.threads),
    {"output",
     [](ExperimentConfig& c, const std::string&, const std::string& v) { c.output = v; },
     [](const ExperimentConfig& c) { return c.output; }},
    {"schedule",
     [](ExperimentConfig& c, const std::string&, const std::string& v) {
       c.run.schedule = schedule_from_string(v);
     },
     [](const ExperimentConfig& c) { return std::string(to_string(c.run.schedule)); }},
    DBL_FIELD("kappa", run.kappa),
    INT_FIELD("horizon_actions", run.horizon_actions),
    DBL_FIELD("wall_clock", run.wall_clock),
    I64_FIELD("buffer_capacity", run.buffer_capacity),
    INT_FIELD("bipolar_n", run.bipolar_n),
    INT_FIELD("parallel_chains", run.parallel_chains),
    INT_FIELD("parallel_length", run.parallel_length),
    DBL_FIELD("parallel_sigma0_sq", run.parallel_sigma0_sq),
    INT_FIELD("grid_phi", run.grid_phi),
    INT_FIELD("grid_phidot", run.grid_phidot),
    DBL_FIELD("noise_var", run.noise_var),
    DBL_FIELD("prior_var", run.prior_var),
    INT_FIELD("lsvi_horizon", run.lsvi_horizon),
    DBL_FIELD("td_discount", run.td_discount),
    DBL_FIELD("td_learning_rate", run.td_learning_rate),
    INT_FIELD("td_iters", run.td_iters),
    DBL_FIELD("ucrl_delta", run.ucrl_delta),
    DBL_FIELD("plan_discount", run.plan_discount),
    DBL_FIELD("plan_span_tol", run.plan_span_tol),
    INT_FIELD("plan_max_sweeps", run.plan_max_sweeps),
    INT_FIELD("plan_cold_sweeps", run.plan_cold_sweeps),
    DBL_FIELD("reward_obs_var", run.reward_obs_var),
    INT_FIELD("eval_horizon", run.eval_horizon),
    DBL_FIELD("eval_every", run.eval_every),
    INT_FIELD("ensemble_size", run.ensemble_size),
    INT_FIELD("minibatch", run.minibatch),
    DBL_FIELD("mlp_learning_rate", run.mlp_learning_rate),
    DBL_FIELD("mlp_noise_var", run.mlp_noise_var),
    DBL_FIELD("mlp_prior_var", run.mlp_prior_var),
    DBL_FIELD("prior_scale", run.prior_scale),
    DBL_FIELD("epsilon", run.epsilon),
};

#undef INT_FIELD
#undef I64_FIELD
#undef U64_FIELD
#undef DBL_FIELD

const FieldDef* find_field(const std::string& key) {
  for (const FieldDef& f : kFields)
    if (key == f.key) return &f;
  return nullptr;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> pairs;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    require(eq != std::string::npos,
            "config line " + std::to_string(lineno) + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
    require(find_field(key) != nullptr, "unknown config key '" + key + "'");
    require(pairs.emplace(key, value).second, "duplicate config key '" + key + "'");
  }
  auto env_it = pairs.find("env");
  require(env_it != pairs.end(), "missing required config key 'env'");
  auto algo_it = pairs.find("algorithm");
  require(algo_it != pairs.end(), "missing required config key 'algorithm'");

  ExperimentConfig cfg =
      default_config(env_from_string(env_it->second), algo_from_string(algo_it->second));
  for (const auto& [key, value] : pairs) find_field(key)->set(cfg, key, value);
  require(!cfg.k_values.empty(), "config: k_values must be nonempty");
  cfg.run.K = cfg.k_values.front();  // placeholder; sweep() sets K per run
  cfg.validate();
  return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const FieldDef& f : kFields) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

const char* primary_metric(EnvKind env) {
  switch (env) {
    case EnvKind::kBipolar:
    case EnvKind::kParallel: return "mean_regret_per_agent";
    case EnvKind::kCartpole2: return "eval_reward";
    case EnvKind::kCartpole4: return "team_total_reward";
  }
  return "?";
}

}  // namespace seedrl::cli
