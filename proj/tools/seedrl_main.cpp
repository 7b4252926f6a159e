#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "seedrl/cli/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seedrl: concurrent reinforcement-learning experiments"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Execute the experiment described by a config file");
  run->add_option("config", config_path, "Path to a flat `key = value` config document")
      ->required();

  std::string curves_path;
  CLI::App* summ = app.add_subcommand("summarize", "Aggregate a curves file to per-K mean +- SE");
  summ->add_option("curves", curves_path, "Path to a curves.csv produced by `run`")->required();

  std::string env_name = "bipolar";
  std::string algo_name = "seed_tabular";
  CLI::App* defs =
      app.add_subcommand("print-defaults", "Print the default config for an env / algorithm");
  defs->add_option("env", env_name, "bipolar|parallel|cartpole2|cartpole4");
  defs->add_option("algorithm", algo_name,
                   "psrl|ucrl|thompson_resample|seed_tabular|seed_lsvi|seed_td|"
                   "seed_ensemble|eps_greedy_dqn");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const seedrl::cli::ExperimentConfig cfg = seedrl::cli::parse_config(read_file(config_path));
      seedrl::cli::run_experiment(cfg, std::cout);
    } else if (summ->parsed()) {
      seedrl::cli::summarize(curves_path, std::cout);
    } else {
      const auto cfg = seedrl::cli::default_config(seedrl::cli::env_from_string(env_name),
                                                   seedrl::cli::algo_from_string(algo_name));
      std::cout << seedrl::cli::emit_config(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
