#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "evomc/experiment.hpp"
#include "evomc/json_io.hpp"
#include "evomc/numeric.hpp"
#include "evomc/oracle.hpp"

namespace {

using evomc::ConfigMap;

// Every config key doubles as a CLI flag so a file is optional and any field
// can be overridden from the command line.
const std::vector<std::string> kConfigKeys = {
    "k",       "l",         "alpha",   "phi",      "lambda",
    "prior_scaling", "n_list", "kernel", "rule",   "m_dist",
    "t_dist",  "luck",      "niche_weights", "steps", "burn_in",
    "thinning", "seed",     "bins",    "record_trajectory", "threshold",
    "locus",   "allele",    "out_dir"};

struct ConfigCli {
  std::string config_path;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    for (const auto& key : kConfigKeys) {
      overrides[key];  // stable storage for the option target
      cmd->add_option("--" + key, overrides[key],
                      "override config key '" + key + "'");
    }
  }

  // Precedence: defaults < config file < command-line flags. Subcommands
  // that never run chains (predict, oracle, compare) pass a placeholder
  // n_list so the shared validation does not demand one.
  evomc::ExperimentConfig resolve(const ConfigMap& defaults = {}) const {
    ConfigMap map = defaults;
    if (!config_path.empty())
      for (const auto& [key, value] : evomc::parse_config_file(config_path))
        map[key] = value;
    for (const auto& [key, value] : overrides)
      if (!value.empty()) map[key] = value;
    return evomc::config_from_map(map);
  }
};

evomc::RunResult read_trajectory_csv(const std::string& path,
                                     const evomc::ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw evomc::ConfigError("compare: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw evomc::ConfigError("compare: empty trajectory file");
  evomc::RunResult run;
  const int per_row = cfg.num_loci * cfg.num_alleles;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<long long> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stoll(cell));
    if (static_cast<int>(values.size()) != per_row + 1)
      throw evomc::ConfigError("compare: trajectory row has wrong width");
    for (int i = 0; i < per_row; ++i)
      run.locus_count_samples.push_back(static_cast<int>(values[1 + i]));
    ++run.num_samples;
  }
  if (run.num_samples == 0)
    throw evomc::ConfigError("compare: trajectory has no samples");
  int n = 0;
  for (int a = 0; a < cfg.num_alleles; ++a)
    n += run.locus_count_samples[a];
  run.n = n;
  return run;
}

int cmd_run(const ConfigCli& cli, int workers) {
  evomc::ExperimentConfig cfg = cli.resolve();
  evomc::SuiteResult suite = evomc::run_suite(cfg, workers);
  if (!cfg.out_dir.empty()) evomc::write_suite_outputs(cfg, suite);
  std::cout << evomc::suite_json(cfg, suite).dump(2) << '\n';
  return suite.all_pass ? 0 : 1;
}

int cmd_predict(const ConfigCli& cli, bool emit_bins) {
  evomc::ExperimentConfig cfg = cli.resolve({{"n_list", "1"}});
  evomc::LimitPrediction pred = evomc::predict_limit(cfg.limit_config());
  nlohmann::ordered_json j = evomc::prediction_json(pred);
  if (emit_bins && pred.density)
    j["bin_masses"] = pred.density->bin_masses(cfg.allele, cfg.bins);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_oracle(const ConfigCli& cli, int n) {
  evomc::ExperimentConfig cfg = cli.resolve({{"n_list", "1"}});
  evomc::AlleleSpace space(cfg.num_alleles, cfg.num_loci);
  evomc::RunParams params = evomc::resolve_run_params(cfg, n);
  std::vector<evomc::DirichletCategorical> procs;
  for (auto& row : params.alpha_eff) procs.emplace_back(row);
  evomc::ProductBreeding breeding(std::move(procs));

  nlohmann::ordered_json j;
  j["n"] = n;
  j["alpha_eff"] = params.alpha_eff;
  j["weights"] = params.weights;

  evomc::CountDistribution counts =
      evomc::stationary_counts(space, n, breeding, params.weights);
  j["num_count_states"] = counts.support.size();
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    evomc::write_counts_csv(
        (std::filesystem::path(cfg.out_dir) /
         ("counts_n" + std::to_string(n) + ".csv")).string(),
        counts);
  }

  try {
    evomc::TransitionMatrix T = evomc::full_transition_matrix(
        cfg.kernel, space, n, breeding, params.weights, cfg.niche_weights);
    std::vector<double> pi =
        cfg.kernel.kind == evomc::KernelKind::niche
            ? evomc::stationary_ordered_niche(space, n, breeding,
                                              cfg.niche_weights)
            : evomc::stationary_ordered(space, n, breeding, params.weights);
    evomc::BalanceReport bal = evomc::check_detailed_balance(pi, T);
    std::vector<double> by_power = evomc::power_iteration(T);
    double max_diff = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s)
      max_diff = std::max(max_diff, std::abs(pi[s] - by_power[s]));
    evomc::CountDistribution lumped = evomc::lump_to_counts(space, n, pi);
    double lump_linf = 0.0;
    for (std::size_t i = 0; i < counts.support.size(); ++i)
      lump_linf = std::max(
          lump_linf, std::abs(counts.probs[i] -
                              lumped.prob_of(counts.support[i])));
    j["ordered"] = {{"num_states", T.num_states},
                    {"balance_max_violation", bal.max_violation},
                    {"power_iteration_max_diff", max_diff},
                    {"counts_lumping_max_diff", lump_linf}};
    if (!cfg.out_dir.empty())
      evomc::write_matrix_csv(
          (std::filesystem::path(cfg.out_dir) /
           ("transition_n" + std::to_string(n) + ".csv")).string(),
          T);
  } catch (const evomc::BudgetError& e) {
    j["ordered"] = nullptr;
    j["ordered_skipped"] = e.what();
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_compare(const ConfigCli& cli, const std::string& trajectory) {
  evomc::ExperimentConfig cfg = cli.resolve({{"n_list", "1"}});
  evomc::RunResult run = read_trajectory_csv(trajectory, cfg);
  evomc::LimitPrediction pred = evomc::predict_limit(cfg.limit_config());
  evomc::CompareReport rep = evomc::compare_run(cfg, pred, run);
  std::cout << evomc::report_json(rep).dump(2) << '\n';
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolutionary Monte Carlo: reversible breed-and-discard "
               "chains, exact small-population laws, and large-population "
               "predictions"};
  app.require_subcommand(1);

  ConfigCli run_cli, predict_cli, oracle_cli, compare_cli;
  int workers = 1;
  bool emit_bins = false;
  int oracle_n = 0;
  std::string trajectory;

  CLI::App* run = app.add_subcommand("run", "run chains and compare to the limit");
  run_cli.attach(run);
  run->add_option("--workers", workers, "worker threads across population sizes");

  CLI::App* predict = app.add_subcommand("predict", "print the limit prediction");
  predict_cli.attach(predict);
  predict->add_flag("--emit-bins", emit_bins,
                    "include binned masses for density predictions");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "exact small-population laws and kernel checks");
  oracle_cli.attach(oracle);
  oracle->add_option("--n", oracle_n, "population size")->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "compare a stored trajectory to the limit prediction");
  compare_cli.attach(compare);
  compare->add_option("--trajectory", trajectory, "trajectory CSV from run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(run_cli, workers);
    if (predict->parsed()) return cmd_predict(predict_cli, emit_bins);
    if (oracle->parsed()) return cmd_oracle(oracle_cli, oracle_n);
    if (compare->parsed()) return cmd_compare(compare_cli, trajectory);
  } catch (const evomc::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const evomc::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const evomc::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
