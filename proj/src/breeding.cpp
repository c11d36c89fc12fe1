#include "evomc/breeding.hpp"

#include <cmath>
#include <stdexcept>

namespace evomc {

DirichletCategorical::DirichletCategorical(std::vector<double> alpha)
    : alpha_(std::move(alpha)), total_(0.0) {
  if (alpha_.size() < 2)
    throw std::invalid_argument("DirichletCategorical: need at least 2 alleles");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument(
          "DirichletCategorical: pseudo-counts must be positive finite");
    total_ += a;
  }
}

AlleleDraw conditional_sample(std::span<const int> counts, int n,
                              const DirichletCategorical& proc,
                              SplitMix64& rng) {
  int k_max = proc.num_alleles();
  double x = rng.uniform_double() * (static_cast<double>(n) + proc.alpha_total());
  for (int k = 0; k < k_max; ++k) {
    double slab = proc.alpha(k) + counts[k];
    if (x < slab) return {k, x < proc.alpha(k)};
    x -= slab;
  }
  // Floating-point edge: fell off the end; attribute to the last allele.
  return {k_max - 1, counts[k_max - 1] == 0};
}

double joint_log_prob(std::span<const int> counts,
                      const DirichletCategorical& proc) {
  if (static_cast<int>(counts.size()) != proc.num_alleles())
    throw std::invalid_argument("joint_log_prob: count size mismatch");
  int n = 0;
  double lp = 0.0;
  for (int k = 0; k < proc.num_alleles(); ++k) {
    if (counts[k] < 0) throw std::invalid_argument("joint_log_prob: negative count");
    n += counts[k];
    lp += std::lgamma(proc.alpha(k) + counts[k]) - std::lgamma(proc.alpha(k));
  }
  lp -= std::lgamma(proc.alpha_total() + n) - std::lgamma(proc.alpha_total());
  return lp;
}

ProductBreeding::ProductBreeding(std::vector<DirichletCategorical> loci)
    : loci_(std::move(loci)) {
  if (loci_.empty())
    throw std::invalid_argument("ProductBreeding: need at least one locus");
}

double ProductBreeding::log_prob(std::span<const int> locus_counts,
                                 int num_alleles) const {
  double lp = 0.0;
  for (int l = 0; l < num_loci(); ++l)
    lp += joint_log_prob(
        locus_counts.subspan(static_cast<std::size_t>(l) * num_alleles,
                             num_alleles),
        loci_[l]);
  return lp;
}

GenomeDraw breed_genome(const AlleleSpace& space,
                        std::span<const int> locus_counts, int n,
                        const ProductBreeding& breeding, SplitMix64& rng) {
  if (breeding.num_loci() != space.num_loci())
    throw std::invalid_argument("breed_genome: locus count mismatch");
  std::uint32_t mask = 0;
  std::vector<int> alleles(space.num_loci());
  for (int l = 0; l < space.num_loci(); ++l) {
    AlleleDraw d = conditional_sample(
        locus_counts.subspan(static_cast<std::size_t>(l) * space.num_alleles(),
                             space.num_alleles()),
        n, breeding.locus(l), rng);
    alleles[l] = d.allele;
    if (d.mutation) mask |= (1u << l);
  }
  return {space.encode(alleles), mask};
}

GenomeDraw breed_genome(const Population& pop, const ProductBreeding& breeding,
                        SplitMix64& rng) {
  const AlleleSpace& space = pop.space();
  std::uint32_t mask = 0;
  std::vector<int> alleles(space.num_loci());
  for (int l = 0; l < space.num_loci(); ++l) {
    AlleleDraw d =
        conditional_sample(pop.locus_counts(l), pop.size(), breeding.locus(l), rng);
    alleles[l] = d.allele;
    if (d.mutation) mask |= (1u << l);
  }
  return {space.encode(alleles), mask};
}

std::vector<double> effective_alpha(std::span<const double> base, double n,
                                    double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("effective_alpha: lambda must lie in [0,1]");
  if (!(n >= 1.0)) throw std::invalid_argument("effective_alpha: n must be >= 1");
  double scale = std::pow(n, 1.0 - lambda);
  std::vector<double> out(base.size());
  for (std::size_t k = 0; k < base.size(); ++k) {
    if (!(base[k] > 0.0))
      throw std::invalid_argument("effective_alpha: base must be positive");
    out[k] = scale * base[k];
  }
  return out;
}

ProductBreeding effective_breeding(
    const std::vector<std::vector<double>>& base_alpha, double n,
    double lambda) {
  std::vector<DirichletCategorical> loci;
  loci.reserve(base_alpha.size());
  for (const auto& a : base_alpha)
    loci.emplace_back(effective_alpha(a, n, lambda));
  return ProductBreeding(std::move(loci));
}

Population sample_initial_population(const AlleleSpace& space,
                                     const ProductBreeding& breeding, int n,
                                     SplitMix64& rng) {
  if (n < 1) throw std::invalid_argument("sample_initial_population: n < 1");
  std::vector<int> counts(
      static_cast<std::size_t>(space.num_loci()) * space.num_alleles(), 0);
  std::vector<std::uint32_t> genomes;
  genomes.reserve(n);
  for (int i = 0; i < n; ++i) {
    GenomeDraw d = breed_genome(space, counts, i, breeding, rng);
    genomes.push_back(d.genome);
    for (int l = 0; l < space.num_loci(); ++l)
      ++counts[static_cast<std::size_t>(l) * space.num_alleles() +
               space.allele_at(d.genome, l)];
  }
  return Population(space, std::move(genomes));
}

}  // namespace evomc
