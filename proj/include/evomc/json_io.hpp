#pragma once

#include <map>
#include <string>

#include "json.hpp"

#include "evomc/experiment.hpp"
#include "evomc/oracle.hpp"

namespace evomc {

using ConfigMap = std::map<std::string, std::string>;

// Flat key=value file; '#' starts a comment, blank lines ignored.
ConfigMap parse_config_file(const std::string& path);

// Builds and validates a full experiment config from key/value pairs.
// Locus and allele indices are 1-based in the map (as in all I/O) and are
// converted to 0-based internally.  Unknown keys are errors.
ExperimentConfig config_from_map(const ConfigMap& map);

nlohmann::ordered_json config_echo_json(const ExperimentConfig& cfg);
nlohmann::ordered_json prediction_json(const LimitPrediction& pred);
nlohmann::ordered_json report_json(const CompareReport& rep);
nlohmann::ordered_json suite_json(const ExperimentConfig& cfg,
                                  const SuiteResult& suite);

// Shortest-width 17-significant-digit decimal form (round-trips a double).
std::string format_g17(double v);

void write_histogram_csv(const std::string& path,
                         const FrequencyHistogram& hist);
void write_trajectory_csv(const std::string& path, const RunResult& run,
                          int num_alleles, int num_loci, long long burn_in,
                          long long thinning);
void write_counts_csv(const std::string& path, const CountDistribution& dist);
void write_matrix_csv(const std::string& path, const TransitionMatrix& matrix);

// Creates cfg.out_dir and writes summary.json plus per-run histogram (and
// optional trajectory) CSVs.
void write_suite_outputs(const ExperimentConfig& cfg, const SuiteResult& suite);

}  // namespace evomc
