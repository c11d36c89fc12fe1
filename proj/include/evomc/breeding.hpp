#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evomc/genotype.hpp"
#include "evomc/rng.hpp"

namespace evomc {

// Polya-urn prior over K alleles: pseudo-counts alpha, all strictly positive.
class DirichletCategorical {
 public:
  explicit DirichletCategorical(std::vector<double> alpha);

  int num_alleles() const { return static_cast<int>(alpha_.size()); }
  double alpha(int k) const { return alpha_[k]; }
  double alpha_total() const { return total_; }
  std::span<const double> alphas() const { return alpha_; }

 private:
  std::vector<double> alpha_;
  double total_;
};

struct AlleleCountVector {
  std::vector<int> counts;
  int n;
};

struct AlleleDraw {
  int allele;
  bool mutation;  // drawn from the prior mass rather than an existing ball
};

// One urn draw given current counts: P(k) = (n_k + alpha_k) / (n + |alpha|).
// Consumes exactly one uniform; the same draw decides mutation attribution
// (joint mass alpha_k/(n+|alpha|) for a mutation producing k).
AlleleDraw conditional_sample(std::span<const int> counts, int n,
                              const DirichletCategorical& proc,
                              SplitMix64& rng);

// Log probability of one ordered sequence whose allele counts are `counts`,
// via log-gamma rising-factorial ratios. Depends on counts only, which is the
// exchangeability of the urn.
double joint_log_prob(std::span<const int> counts,
                      const DirichletCategorical& proc);

// Independent urn per locus.
class ProductBreeding {
 public:
  explicit ProductBreeding(std::vector<DirichletCategorical> loci);

  int num_loci() const { return static_cast<int>(loci_.size()); }
  const DirichletCategorical& locus(int l) const { return loci_[l]; }

  // Log probability of one ordered population with the given per-locus
  // counts (row-major L x K, each row summing to the same n).
  double log_prob(std::span<const int> locus_counts, int num_alleles) const;

 private:
  std::vector<DirichletCategorical> loci_;
};

struct GenomeDraw {
  std::uint32_t genome;
  std::uint32_t mutation_mask;  // bit l set iff locus l drew from the prior
};

// Breed one genome from per-locus counts (row-major L x K over n members).
GenomeDraw breed_genome(const AlleleSpace& space,
                        std::span<const int> locus_counts, int n,
                        const ProductBreeding& breeding, SplitMix64& rng);
GenomeDraw breed_genome(const Population& pop, const ProductBreeding& breeding,
                        SplitMix64& rng);

// Urn prior actually used at population size n under scaling exponent
// lambda in [0,1]: n^(1-lambda) * base.
std::vector<double> effective_alpha(std::span<const double> base, double n,
                                    double lambda);

// Per-locus effective_alpha applied to a per-locus base prior.
ProductBreeding effective_breeding(
    const std::vector<std::vector<double>>& base_alpha, double n,
    double lambda);

// n genomes drawn sequentially from the urn prior (each conditioned on all
// previous draws) — an exchangeable sample from the breeding law.
Population sample_initial_population(const AlleleSpace& space,
                                     const ProductBreeding& breeding, int n,
                                     SplitMix64& rng);

}  // namespace evomc
