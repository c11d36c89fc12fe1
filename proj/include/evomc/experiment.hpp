#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "evomc/breeding.hpp"
#include "evomc/genotype.hpp"
#include "evomc/kernels.hpp"
#include "evomc/limits.hpp"
#include "evomc/rng.hpp"

namespace evomc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A full experiment: one model family (prior, costs, scaling exponent),
// one kernel, and a list of population sizes to run.  Allele and locus
// indices are 0-based here; all file and CLI I/O is 1-based.
struct ExperimentConfig {
  int num_alleles = 2;
  int num_loci = 1;
  std::vector<std::vector<double>> alpha;  // one row per locus
  std::vector<double> phi;                 // one cost per genome
  double lambda = 0.0;
  PriorScaling prior_scaling = PriorScaling::scaled;

  std::vector<int> n_list;
  KernelConfig kernel;
  std::vector<double> niche_weights;  // row-major n x num_genomes, niche only

  long long steps = 10'000'000;
  long long burn_in = 1'000'000;
  long long thinning = 100;
  std::uint64_t seed = 1;
  int bins = 200;
  bool record_trajectory = false;
  double threshold = 0.05;
  int locus = 0;   // reported coordinate
  int allele = 0;  // reported coordinate
  std::string out_dir;

  void validate() const;
  LimitConfig limit_config() const;
};

// Per-size derived parameters: the prior actually fed to the urn and the
// weight table actually consulted by tournaments.
struct RunParams {
  std::vector<std::vector<double>> alpha_eff;
  std::vector<double> weights;
};

RunParams resolve_run_params(const ExperimentConfig& cfg, int n);

struct RunResult {
  int n = 0;
  long long num_samples = 0;
  // Thinned samples of per-locus allele counts, row-major
  // (sample, locus, allele).
  std::vector<int> locus_count_samples;
  // Genome and luck value of one uniformly probed slot per sample.
  std::vector<std::uint32_t> probe_genome;
  std::vector<double> probe_psi;

  int count_at(long long sample, int locus, int allele, int num_alleles,
               int num_loci) const {
    return locus_count_samples[(sample * num_loci + locus) * num_alleles +
                               allele];
  }
};

RunResult run_chain(const ExperimentConfig& cfg, int n, SplitMix64& rng);

struct FrequencyHistogram {
  int locus = 0;
  int allele = 0;
  int n = 0;
  long long sample_count = 0;
  std::vector<double> masses;  // equal-width bins of [0, 1]
  double mean = 0.0;
  double sd = 0.0;
  double se_mean = 0.0;  // batch-means standard error of the mean
};

FrequencyHistogram build_histogram(const RunResult& run, int num_alleles,
                                   int num_loci, int locus, int allele,
                                   int bins);

enum class CompareKind { point_mass, mixture, density };

std::string to_string(CompareKind kind);

struct CompareReport {
  CompareKind kind = CompareKind::point_mass;
  int n = 0;
  double empirical_mean = 0.0;
  double empirical_sd = 0.0;
  double se_mean = 0.0;
  double predicted = 0.0;       // target frequency for point-mass comparisons
  double mean_abs_error = 0.0;  // |empirical_mean - predicted|
  double rms_deviation = 0.0;   // sqrt(mean_abs_error^2 + sd^2)
  double distance = 0.0;  // rms (point), total variation (density),
                          // rms to nearest mode (mixture)
  std::vector<double> mode_weights;  // empirical, mixture comparisons only
  double threshold = 0.0;
  bool pass = false;
};

CompareReport compare_run(const ExperimentConfig& cfg,
                          const LimitPrediction& pred, const RunResult& run);

struct SuiteResult {
  LimitPrediction prediction;
  std::vector<RunResult> runs;        // one per entry of n_list
  std::vector<CompareReport> reports;
  bool all_pass = true;
};

// Runs every population size in cfg.n_list.  Each run draws from its own
// random stream split off the suite seed by run index, so results are
// identical for any worker count.
SuiteResult run_suite(const ExperimentConfig& cfg, int workers = 1);

}  // namespace evomc
