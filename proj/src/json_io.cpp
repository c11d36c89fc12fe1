#include "evomc/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

namespace evomc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(delim, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      return parts;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("config: bad number for '" + key + "': " + s);
  return v;
}

long long parse_ll(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("config: bad integer for '" + key + "': " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError("config: bad unsigned integer for '" + key + "': " + s);
  return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
  std::string t = trim(s);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError("config: bad boolean for '" + key + "': " + s);
}

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& key) {
  std::vector<double> out;
  for (const auto& part : split(s, ','))
    out.push_back(parse_double(part, key));
  return out;
}

// "3" for a deterministic count; "v:p,v:p" for a finite distribution.
IntDistribution parse_int_dist(const std::string& s, const std::string& key) {
  if (s.find(':') == std::string::npos)
    return IntDistribution::deterministic(
        static_cast<int>(parse_ll(s, key)));
  std::vector<int> values;
  std::vector<double> probs;
  for (const auto& part : split(s, ',')) {
    auto pair = split(part, ':');
    if (pair.size() != 2)
      throw ConfigError("config: bad value:prob entry for '" + key + "'");
    values.push_back(static_cast<int>(parse_ll(pair[0], key)));
    probs.push_back(parse_double(pair[1], key));
  }
  return IntDistribution(values, probs);
}

LuckConfig parse_luck(const std::string& s) {
  LuckConfig luck;
  for (const auto& part : split(s, ',')) {
    auto pair = split(part, ':');
    if (pair.size() != 2)
      throw ConfigError("config: bad value:prob entry for 'luck'");
    luck.values.push_back(parse_double(pair[0], "luck"));
    luck.probs.push_back(parse_double(pair[1], "luck"));
  }
  return luck;
}

KernelKind parse_kernel(const std::string& s) {
  if (s == "single_tournament") return KernelKind::single_tournament;
  if (s == "inverse_fitness") return KernelKind::inverse_fitness;
  if (s == "breed_many") return KernelKind::breed_many;
  if (s == "niche") return KernelKind::niche;
  throw ConfigError("config: unknown kernel: " + s);
}

std::string kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::single_tournament: return "single_tournament";
    case KernelKind::inverse_fitness: return "inverse_fitness";
    case KernelKind::breed_many: return "breed_many";
    case KernelKind::niche: return "niche";
  }
  return "unknown";
}

nlohmann::ordered_json int_dist_json(const IntDistribution& dist) {
  return {{"values", dist.values()}, {"probs", dist.probs()}};
}

}  // namespace

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  ConfigMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config: " + path + ":" + std::to_string(line_no) +
                        ": empty key");
    map[key] = value;
  }
  return map;
}

ExperimentConfig config_from_map(const ConfigMap& map) {
  ExperimentConfig cfg;
  bool saw_locus = false, saw_allele = false;
  for (const auto& [key, value] : map) {
    if (key == "k") {
      cfg.num_alleles = static_cast<int>(parse_ll(value, key));
    } else if (key == "l") {
      cfg.num_loci = static_cast<int>(parse_ll(value, key));
    } else if (key == "alpha") {
      cfg.alpha.clear();
      for (const auto& row : split(value, ';'))
        cfg.alpha.push_back(parse_double_list(row, key));
    } else if (key == "phi") {
      cfg.phi = parse_double_list(value, key);
    } else if (key == "lambda") {
      cfg.lambda = parse_double(value, key);
    } else if (key == "prior_scaling") {
      if (value == "fixed")
        cfg.prior_scaling = PriorScaling::fixed;
      else if (value == "scaled")
        cfg.prior_scaling = PriorScaling::scaled;
      else
        throw ConfigError("config: prior_scaling must be fixed or scaled");
    } else if (key == "n_list") {
      cfg.n_list.clear();
      for (const auto& part : split(value, ','))
        cfg.n_list.push_back(static_cast<int>(parse_ll(part, key)));
    } else if (key == "kernel") {
      cfg.kernel.kind = parse_kernel(value);
    } else if (key == "rule") {
      if (value == "ratio")
        cfg.kernel.rule = TournamentRule::ratio;
      else if (value == "metropolis_min")
        cfg.kernel.rule = TournamentRule::metropolis_min;
      else
        throw ConfigError("config: rule must be ratio or metropolis_min");
    } else if (key == "m_dist") {
      cfg.kernel.offspring = parse_int_dist(value, key);
    } else if (key == "t_dist") {
      cfg.kernel.tournaments = parse_int_dist(value, key);
    } else if (key == "luck") {
      cfg.kernel.luck = parse_luck(value);
    } else if (key == "niche_weights") {
      cfg.niche_weights.clear();
      for (const auto& row : split(value, ';'))
        for (double w : parse_double_list(row, key))
          cfg.niche_weights.push_back(w);
    } else if (key == "steps") {
      cfg.steps = parse_ll(value, key);
    } else if (key == "burn_in") {
      cfg.burn_in = parse_ll(value, key);
    } else if (key == "thinning") {
      cfg.thinning = parse_ll(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, key);
    } else if (key == "bins") {
      cfg.bins = static_cast<int>(parse_ll(value, key));
    } else if (key == "record_trajectory") {
      cfg.record_trajectory = parse_bool(value, key);
    } else if (key == "threshold") {
      cfg.threshold = parse_double(value, key);
    } else if (key == "locus") {
      cfg.locus = static_cast<int>(parse_ll(value, key)) - 1;
      saw_locus = true;
    } else if (key == "allele") {
      cfg.allele = static_cast<int>(parse_ll(value, key)) - 1;
      saw_allele = true;
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else {
      throw ConfigError("config: unknown key: " + key);
    }
  }
  if ((saw_locus && cfg.locus < 0) || (saw_allele && cfg.allele < 0))
    throw ConfigError("config: locus and allele are 1-based");
  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

nlohmann::ordered_json config_echo_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["k"] = cfg.num_alleles;
  j["l"] = cfg.num_loci;
  j["alpha"] = cfg.alpha;
  j["phi"] = cfg.phi;
  j["lambda"] = cfg.lambda;
  j["prior_scaling"] =
      cfg.prior_scaling == PriorScaling::fixed ? "fixed" : "scaled";
  j["n_list"] = cfg.n_list;
  j["kernel"] = kernel_name(cfg.kernel.kind);
  j["rule"] = cfg.kernel.rule == TournamentRule::ratio ? "ratio"
                                                       : "metropolis_min";
  j["m_dist"] = int_dist_json(cfg.kernel.offspring);
  j["t_dist"] = int_dist_json(cfg.kernel.tournaments);
  if (cfg.kernel.luck)
    j["luck"] = {{"values", cfg.kernel.luck->values},
                 {"probs", cfg.kernel.luck->probs}};
  else
    j["luck"] = nullptr;
  if (!cfg.niche_weights.empty()) j["niche_weights"] = cfg.niche_weights;
  j["steps"] = cfg.steps;
  j["burn_in"] = cfg.burn_in;
  j["thinning"] = cfg.thinning;
  j["seed"] = cfg.seed;
  j["bins"] = cfg.bins;
  j["record_trajectory"] = cfg.record_trajectory;
  j["threshold"] = cfg.threshold;
  j["locus"] = cfg.locus + 1;
  j["allele"] = cfg.allele + 1;
  j["out_dir"] = cfg.out_dir;
  return j;
}

nlohmann::ordered_json prediction_json(const LimitPrediction& pred) {
  nlohmann::ordered_json j;
  j["regime"] = to_string(pred.regime);
  j["theta"] = pred.theta;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& c : pred.components)
    comps.push_back({{"weight", c.weight},
                     {"locus_marginals", c.locus_marginals}});
  j["components"] = comps;
  if (pred.density) {
    j["density"] = {{"alpha", pred.density->alpha()},
                    {"phi", pred.density->phi()},
                    {"tilt_normalizer", pred.density->tilt_normalizer()}};
  }
  if (pred.product_report) {
    const auto& rep = *pred.product_report;
    nlohmann::ordered_json minima = nlohmann::ordered_json::array();
    for (const auto& m : rep.minima)
      minima.push_back({{"z1", m.z1},
                        {"z2", m.z2},
                        {"h11", m.h11},
                        {"h12", m.h12},
                        {"h22", m.h22},
                        {"det", m.det},
                        {"objective", m.objective}});
    j["product_report"] = {{"regime", to_string(rep.regime)},
                           {"convexity_certified", rep.convexity_certified},
                           {"certificate_lhs", rep.certificate_lhs},
                           {"certificate_rhs", rep.certificate_rhs},
                           {"minima", minima},
                           {"weights", rep.weights},
                           {"rejected", rep.rejected}};
  }
  return j;
}

nlohmann::ordered_json report_json(const CompareReport& rep) {
  nlohmann::ordered_json j;
  j["n"] = rep.n;
  j["kind"] = to_string(rep.kind);
  j["mean"] = rep.empirical_mean;
  j["sd"] = rep.empirical_sd;
  j["se_mean"] = rep.se_mean;
  if (std::isfinite(rep.predicted)) j["predicted"] = rep.predicted;
  j["mean_abs_error"] = rep.mean_abs_error;
  j["rms_deviation"] = rep.rms_deviation;
  j["distance"] = rep.distance;
  if (!rep.mode_weights.empty()) j["mode_weights"] = rep.mode_weights;
  j["threshold"] = rep.threshold;
  j["pass"] = rep.pass;
  return j;
}

nlohmann::ordered_json suite_json(const ExperimentConfig& cfg,
                                  const SuiteResult& suite) {
  nlohmann::ordered_json j;
  j["config_echo"] = config_echo_json(cfg);
  j["prediction"] = prediction_json(suite.prediction);
  nlohmann::ordered_json per_run = nlohmann::ordered_json::array();
  for (const auto& rep : suite.reports) per_run.push_back(report_json(rep));
  j["per_run"] = per_run;
  j["all_pass"] = suite.all_pass;
  j["seed"] = cfg.seed;
  j["version"] = "0.1.0";
  return j;
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_histogram_csv(const std::string& path,
                         const FrequencyHistogram& hist) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "bin_left,bin_right,mass\n";
  int bins = static_cast<int>(hist.masses.size());
  for (int b = 0; b < bins; ++b) {
    out << format_g17(static_cast<double>(b) / bins) << ','
        << format_g17(static_cast<double>(b + 1) / bins) << ','
        << format_g17(hist.masses[b]) << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const RunResult& run,
                          int num_alleles, int num_loci, long long burn_in,
                          long long thinning) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "step";
  for (int l = 1; l <= num_loci; ++l)
    for (int a = 1; a <= num_alleles; ++a)
      out << ",locus" << l << "_allele" << a;
  out << '\n';
  for (long long s = 0; s < run.num_samples; ++s) {
    out << (burn_in + (s + 1) * thinning);
    for (int l = 0; l < num_loci; ++l)
      for (int a = 0; a < num_alleles; ++a)
        out << ',' << run.count_at(s, l, a, num_alleles, num_loci);
    out << '\n';
  }
}

void write_counts_csv(const std::string& path, const CountDistribution& dist) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::uint32_t g = 1; g <= dist.num_genomes; ++g)
    out << "genome" << g << ',';
  out << "probability\n";
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    for (int c : dist.support[i]) out << c << ',';
    out << format_g17(dist.probs[i]) << '\n';
  }
}

void write_matrix_csv(const std::string& path, const TransitionMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "from,to,probability\n";
  for (std::size_t i = 0; i < matrix.num_states; ++i)
    for (std::size_t j = 0; j < matrix.num_states; ++j) {
      double p = matrix.at(i, j);
      if (p != 0.0) out << i << ',' << j << ',' << format_g17(p) << '\n';
    }
}

void write_suite_outputs(const ExperimentConfig& cfg,
                         const SuiteResult& suite) {
  if (cfg.out_dir.empty())
    throw ConfigError("config: out_dir is required to write results");
  std::filesystem::create_directories(cfg.out_dir);
  std::filesystem::path dir(cfg.out_dir);
  for (std::size_t i = 0; i < suite.runs.size(); ++i) {
    const RunResult& run = suite.runs[i];
    FrequencyHistogram hist =
        build_histogram(run, cfg.num_alleles, cfg.num_loci, cfg.locus,
                        cfg.allele, cfg.bins);
    write_histogram_csv(
        (dir / ("hist_n" + std::to_string(run.n) + ".csv")).string(), hist);
    if (cfg.record_trajectory)
      write_trajectory_csv(
          (dir / ("traj_n" + std::to_string(run.n) + ".csv")).string(), run,
          cfg.num_alleles, cfg.num_loci, cfg.burn_in, cfg.thinning);
  }
  std::ofstream out((dir / "summary.json").string());
  if (!out) throw std::runtime_error("cannot write summary.json");
  out << suite_json(cfg, suite).dump(2) << '\n';
}

}  // namespace evomc
