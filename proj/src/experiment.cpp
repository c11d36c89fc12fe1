#include "evomc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "evomc/numeric.hpp"

namespace evomc {

void ExperimentConfig::validate() const {
  if (num_alleles < 2) throw ConfigError("config: k must be at least 2");
  if (num_loci < 1) throw ConfigError("config: l must be at least 1");
  if (static_cast<int>(alpha.size()) != num_loci)
    throw ConfigError("config: alpha needs one row per locus");
  for (const auto& row : alpha) {
    if (static_cast<int>(row.size()) != num_alleles)
      throw ConfigError("config: alpha row size must equal k");
    for (double a : row)
      if (!(a > 0.0) || !std::isfinite(a))
        throw ConfigError("config: alpha entries must be positive finite");
  }
  AlleleSpace space(num_alleles, num_loci);
  if (phi.size() != space.num_genomes())
    throw ConfigError("config: phi needs one entry per genome");
  for (double p : phi)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ConfigError("config: phi entries must be finite and non-negative");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw ConfigError("config: lambda must be finite and non-negative");
  if (prior_scaling == PriorScaling::scaled && lambda > 1.0)
    throw ConfigError("config: scaled prior requires lambda in [0, 1]");
  if (n_list.empty()) throw ConfigError("config: n_list must not be empty");
  for (int n : n_list)
    if (n < 1) throw ConfigError("config: population sizes must be positive");
  try {
    kernel.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (kernel.kind == KernelKind::niche) {
    if (n_list.size() != 1)
      throw ConfigError("config: niche kernel supports a single n");
    if (niche_weights.size() !=
        static_cast<std::size_t>(n_list[0]) * space.num_genomes())
      throw ConfigError("config: niche_weights needs n x k^l entries");
    for (double w : niche_weights)
      if (!(w > 0.0) || !std::isfinite(w))
        throw ConfigError("config: niche_weights must be positive finite");
  } else if (!niche_weights.empty()) {
    throw ConfigError("config: niche_weights only apply to the niche kernel");
  }
  if (steps < 1) throw ConfigError("config: steps must be positive");
  if (burn_in < 0 || burn_in >= steps)
    throw ConfigError("config: burn_in must lie inside [0, steps)");
  if (thinning < 1) throw ConfigError("config: thinning must be positive");
  if (bins < 1) throw ConfigError("config: bins must be positive");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw ConfigError("config: threshold must be positive finite");
  if (locus < 0 || locus >= num_loci) throw ConfigError("config: locus out of range");
  if (allele < 0 || allele >= num_alleles)
    throw ConfigError("config: allele out of range");
}

LimitConfig ExperimentConfig::limit_config() const {
  LimitConfig lc;
  lc.num_alleles = num_alleles;
  lc.num_loci = num_loci;
  lc.alpha = alpha;
  lc.phi = phi;
  lc.lambda = lambda;
  lc.prior_scaling = prior_scaling;
  return lc;
}

RunParams resolve_run_params(const ExperimentConfig& cfg, int n) {
  RunParams params;
  if (cfg.prior_scaling == PriorScaling::scaled) {
    params.alpha_eff.reserve(cfg.alpha.size());
    for (const auto& row : cfg.alpha)
      params.alpha_eff.push_back(effective_alpha(row, n, cfg.lambda));
  } else {
    params.alpha_eff = cfg.alpha;
  }
  params.weights = scaled_weights(cfg.phi, n, cfg.lambda);
  return params;
}

RunResult run_chain(const ExperimentConfig& cfg, int n, SplitMix64& rng) {
  AlleleSpace space(cfg.num_alleles, cfg.num_loci);
  RunParams params = resolve_run_params(cfg, n);
  std::vector<DirichletCategorical> procs;
  procs.reserve(params.alpha_eff.size());
  for (auto& row : params.alpha_eff) procs.emplace_back(row);
  ProductBreeding breeding(std::move(procs));

  Population pop = sample_initial_population(space, breeding, n, rng);
  std::vector<double> niche =
      cfg.kernel.kind == KernelKind::niche ? cfg.niche_weights
                                           : std::vector<double>{};
  Chain chain(std::move(pop), breeding, cfg.kernel, params.weights,
              std::move(niche), rng);

  RunResult out;
  out.n = n;
  long long expected = (cfg.steps - cfg.burn_in) / cfg.thinning;
  out.locus_count_samples.reserve(expected * cfg.num_loci * cfg.num_alleles);
  out.probe_genome.reserve(expected);
  out.probe_psi.reserve(expected);

  for (long long s = 1; s <= cfg.steps; ++s) {
    chain.step(rng);
    if (s > cfg.burn_in && (s - cfg.burn_in) % cfg.thinning == 0) {
      const Population& p = chain.population();
      for (int l = 0; l < cfg.num_loci; ++l) {
        auto row = p.locus_counts(l);
        out.locus_count_samples.insert(out.locus_count_samples.end(),
                                       row.begin(), row.end());
      }
      int slot = static_cast<int>(rng.uniform_index(n));
      out.probe_genome.push_back(p.genome(slot));
      out.probe_psi.push_back(chain.psi(slot));
      ++out.num_samples;
    }
  }
  return out;
}

FrequencyHistogram build_histogram(const RunResult& run, int num_alleles,
                                   int num_loci, int locus, int allele,
                                   int bins) {
  FrequencyHistogram hist;
  hist.locus = locus;
  hist.allele = allele;
  hist.n = run.n;
  hist.sample_count = run.num_samples;
  hist.masses.assign(bins, 0.0);
  if (run.num_samples == 0) return hist;

  double sum = 0.0, sum_sq = 0.0;
  for (long long s = 0; s < run.num_samples; ++s) {
    double f = static_cast<double>(
                   run.count_at(s, locus, allele, num_alleles, num_loci)) /
               run.n;
    int b = std::min(bins - 1, static_cast<int>(f * bins));
    hist.masses[b] += 1.0;
    sum += f;
    sum_sq += f * f;
  }
  for (double& m : hist.masses) m /= static_cast<double>(run.num_samples);
  hist.mean = sum / static_cast<double>(run.num_samples);
  hist.sd = std::sqrt(
      std::max(0.0, sum_sq / static_cast<double>(run.num_samples) -
                        hist.mean * hist.mean));

  // Batch-means standard error: 100 equal consecutive batches.
  const int batches = 100;
  long long per = run.num_samples / batches;
  if (per >= 1) {
    std::vector<double> means(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (long long s = b * per; s < (b + 1) * per; ++s)
        acc += static_cast<double>(
                   run.count_at(s, locus, allele, num_alleles, num_loci)) /
               run.n;
      means[b] = acc / static_cast<double>(per);
    }
    double bm = 0.0;
    for (double m : means) bm += m;
    bm /= batches;
    double var = 0.0;
    for (double m : means) var += (m - bm) * (m - bm);
    var /= (batches - 1);
    hist.se_mean = std::sqrt(var / batches);
  } else {
    hist.se_mean = run.num_samples > 1
                       ? hist.sd / std::sqrt(static_cast<double>(
                                       run.num_samples - 1))
                       : hist.sd;
  }
  return hist;
}

std::string to_string(CompareKind kind) {
  switch (kind) {
    case CompareKind::point_mass: return "point_mass";
    case CompareKind::mixture: return "mixture";
    case CompareKind::density: return "density";
  }
  return "unknown";
}

CompareReport compare_run(const ExperimentConfig& cfg,
                          const LimitPrediction& pred, const RunResult& run) {
  CompareReport rep;
  rep.n = run.n;
  rep.threshold = cfg.threshold;
  FrequencyHistogram hist = build_histogram(run, cfg.num_alleles, cfg.num_loci,
                                            cfg.locus, cfg.allele, cfg.bins);
  rep.empirical_mean = hist.mean;
  rep.empirical_sd = hist.sd;
  rep.se_mean = hist.se_mean;

  if (pred.density) {
    rep.kind = CompareKind::density;
    rep.predicted = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> target = pred.density->bin_masses(cfg.allele, cfg.bins);
    rep.distance = tv_distance(hist.masses, target);
    rep.mean_abs_error = rep.distance;
    rep.rms_deviation = rep.distance;
    rep.pass = rep.distance <= cfg.threshold;
    return rep;
  }

  if (pred.components.size() == 1) {
    rep.kind = CompareKind::point_mass;
    rep.predicted = pred.frequency_point(cfg.locus, cfg.allele);
    rep.mean_abs_error = std::abs(hist.mean - rep.predicted);
    rep.rms_deviation =
        std::sqrt(rep.mean_abs_error * rep.mean_abs_error + hist.sd * hist.sd);
    rep.distance = rep.rms_deviation;
    rep.pass = rep.mean_abs_error <= cfg.threshold;
    return rep;
  }

  // Mixture: assign each sample to the nearest predicted mode in the joint
  // per-locus frequency space.
  rep.kind = CompareKind::mixture;
  rep.predicted = std::numeric_limits<double>::quiet_NaN();
  rep.mode_weights.assign(pred.components.size(), 0.0);
  double sq_acc = 0.0;
  std::vector<double> freq(cfg.num_loci);
  for (long long s = 0; s < run.num_samples; ++s) {
    for (int l = 0; l < cfg.num_loci; ++l)
      freq[l] = static_cast<double>(run.count_at(s, l, cfg.allele,
                                                 cfg.num_alleles,
                                                 cfg.num_loci)) /
                run.n;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < pred.components.size(); ++i) {
      double d = 0.0;
      for (int l = 0; l < cfg.num_loci; ++l) {
        double diff = freq[l] - pred.components[i].locus_marginals[l][cfg.allele];
        d += diff * diff;
      }
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    sq_acc += best;
    rep.mode_weights[best_i] += 1.0;
  }
  for (double& w : rep.mode_weights)
    w /= static_cast<double>(run.num_samples);
  rep.distance = std::sqrt(sq_acc / static_cast<double>(run.num_samples));
  rep.mean_abs_error = rep.distance;
  rep.rms_deviation = rep.distance;
  rep.pass = rep.distance <= cfg.threshold;
  return rep;
}

SuiteResult run_suite(const ExperimentConfig& cfg, int workers) {
  cfg.validate();
  SuiteResult out;
  out.prediction = predict_limit(cfg.limit_config());
  out.runs.resize(cfg.n_list.size());

  auto run_one = [&](std::size_t i) {
    SplitMix64 rng = SplitMix64(cfg.seed).split(i);
    out.runs[i] = run_chain(cfg, cfg.n_list[i], rng);
  };

  int effective = std::max(1, workers);
  if (effective == 1 || cfg.n_list.size() == 1) {
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= cfg.n_list.size()) return;
        run_one(i);
      }
    };
    std::vector<std::thread> pool;
    int spawn = std::min<int>(effective, static_cast<int>(cfg.n_list.size()));
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    out.reports.push_back(compare_run(cfg, out.prediction, out.runs[i]));
    out.all_pass = out.all_pass && out.reports.back().pass;
  }
  return out;
}

}  // namespace evomc
