#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cli_internal.hpp"
#include "harness_internal.hpp"
#include "json.hpp"
#include "seedrl/cli/cli.hpp"

namespace seedrl::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kCurvesHeader = "K,instance,metric_name,time_or_step,value";

fs::path resolve_output(const std::string& output) {
  fs::path p(output);
  const char* root = std::getenv("SEEDRL_OUTPUT_ROOT");
  if (root != nullptr && *root != '\0' && p.is_relative()) p = fs::path(root) / p;
  return p;
}

std::string hex_key(uint64_t k) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(k));
  return buf;
}

std::string utc_now() {
  const std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  const fs::path dir = resolve_output(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(fs::is_directory(dir), "cannot create output directory: " + dir.string());

  const fs::path curves_path = dir / "curves.csv";
  std::ofstream curves(curves_path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(curves), "cannot open curves file for writing: " + curves_path.string());

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const harness::SweepResult res = harness::sweep(cfg.run, cfg.k_values, cfg.n_instances);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  curves << kCurvesHeader << '\n';
  for (const harness::CurveRow& r : res.rows) {
    curves << r.K << ',' << r.instance << ',' << r.metric << ',' << fmt_double(r.time_or_step)
           << ',' << fmt_double(r.value) << '\n';
  }
  curves.flush();
  require(curves.good(), "error writing curves file: " + curves_path.string());
  curves.close();

  const char* metric = primary_metric(cfg.run.env);
  for (int K : cfg.k_values) {
    const auto [mean, se] = harness::aggregate_metric(res.rows, K, metric);
    out << "K=" << K << "  " << metric << " = " << fmt_double(mean) << " +- " << fmt_double(se)
        << "  (n=" << cfg.n_instances << ")\n";
  }

  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = emit_config(cfg);
  j["curves_file"] = curves_path.string();
  j["master_seed"] = cfg.run.master_seed;
  nlohmann::json streams = nlohmann::json::array();
  for (int K : cfg.k_values) {
    harness::RunConfig rc = cfg.run;
    rc.K = K;
    for (int inst = 0; inst < cfg.n_instances; ++inst) {
      streams.push_back({{"K", K},
                         {"instance", inst},
                         {"env_key", hex_key(harness::env_stream_key(rc, inst))},
                         {"sched_key", hex_key(harness::sched_stream_key(rc, inst))},
                         {"algo_key", hex_key(harness::algo_stream_key(rc, inst))}});
    }
  }
  j["instance_streams"] = std::move(streams);
  j["timing"] = {{"started_utc", started}, {"elapsed_seconds", elapsed}};

  const fs::path manifest_path = dir / "manifest.json";
  const fs::path tmp_path = dir / "manifest.json.tmp";
  {
    std::ofstream mf(tmp_path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(mf), "cannot open manifest for writing: " + tmp_path.string());
    mf << j.dump(2) << '\n';
    mf.flush();
    require(mf.good(), "error writing manifest: " + tmp_path.string());
  }
  fs::rename(tmp_path, manifest_path, ec);
  require(!ec, "cannot finalize manifest: " + manifest_path.string() + " (" + ec.message() + ")");

  out << "wrote " << curves_path.string() << '\n';
  out << "wrote " << manifest_path.string() << '\n';
}

void summarize(const std::string& curves_path, std::ostream& out) {
  std::ifstream in(curves_path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open curves file: " + curves_path);

  std::vector<harness::CurveRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      require(line == kCurvesHeader, curves_path + " line 1: expected header `" +
                                         std::string(kCurvesHeader) + "`, got `" + line + "`");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string item;
    while (std::getline(ls, item, ',')) fields.push_back(item);
    require(fields.size() == 5, curves_path + " line " + std::to_string(lineno) +
                                    ": expected 5 comma-separated fields, got " +
                                    std::to_string(fields.size()));
    auto bad = [&](const char* what, const std::string& got) {
      fail(curves_path + " line " + std::to_string(lineno) + ": field '" + std::string(what) +
           "' is malformed: '" + got + "'");
    };
    auto field_int = [&](const std::string& s, const char* what) {
      const std::string t = trim(s);
      size_t p = 0;
      long long x = 0;
      try {
        x = std::stoll(t, &p);
      } catch (const std::exception&) {
        bad(what, s);
      }
      if (p != t.size()) bad(what, s);
      return static_cast<int>(x);
    };
    auto field_dbl = [&](const std::string& s, const char* what) {
      const std::string t = trim(s);
      size_t p = 0;
      double x = 0.0;
      try {
        x = std::stod(t, &p);
      } catch (const std::exception&) {
        bad(what, s);
      }
      if (p != t.size()) bad(what, s);
      return x;
    };
    harness::CurveRow r;
    r.K = field_int(fields[0], "K");
    r.instance = field_int(fields[1], "instance");
    r.metric = trim(fields[2]);
    require(!r.metric.empty(),
            curves_path + " line " + std::to_string(lineno) + ": empty metric_name");
    r.time_or_step = field_dbl(fields[3], "time_or_step");
    r.value = field_dbl(fields[4], "value");
    rows.push_back(std::move(r));
  }
  require(lineno > 0, "empty curves file: " + curves_path);
  require(!rows.empty(), "curves file has no data rows: " + curves_path);

  // metric -> K -> distinct instances
  std::map<std::string, std::map<int, std::set<int>>> index;
  for (const harness::CurveRow& r : rows) index[r.metric][r.K].insert(r.instance);

  out << "metric,K,n,mean,se\n";
  for (const auto& [metric, by_k] : index) {
    for (const auto& [K, insts] : by_k) {
      const auto [mean, se] = harness::aggregate_metric(rows, K, metric);
      out << metric << ',' << K << ',' << insts.size() << ',' << fmt_double(mean) << ','
          << fmt_double(se) << '\n';
    }
  }
}

}  // namespace seedrl::cli
