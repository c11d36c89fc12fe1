#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace evomc {

// Genomes are integers encoding L loci with K alleles each, base-K digits,
// locus 0 in the least significant digit.
class AlleleSpace {
 public:
  AlleleSpace(int num_alleles, int num_loci);

  int num_alleles() const { return k_; }
  int num_loci() const { return l_; }
  // K^L, guaranteed to fit in int32 by the constructor.
  std::uint32_t num_genomes() const { return size_; }

  int allele_at(std::uint32_t genome, int locus) const {
    return static_cast<int>((genome / pow_[locus]) % k_);
  }

  std::uint32_t encode(std::span<const int> alleles) const;
  std::vector<int> decode(std::uint32_t genome) const;

 private:
  int k_;
  int l_;
  std::uint32_t size_;
  std::vector<std::uint32_t> pow_;
};

// Probability vector on a finite set; validated and renormalized on entry.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> values);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

// Selection weights w_n(g) = exp(-phi(g) / n^lambda) for the strength
// schedule indexed by population size n.
std::vector<double> scaled_weights(std::span<const double> phi, double n,
                                   double lambda);

// Weighted reweighting r(g) = q(g) w(g) / sum_h q(h) w(h).
std::vector<double> r_map(std::span<const double> q,
                          std::span<const double> w);

// A population of n genomes plus per-locus allele count tables kept in sync
// under replacement.
class Population {
 public:
  Population(const AlleleSpace& space, std::vector<std::uint32_t> genomes);

  const AlleleSpace& space() const { return space_; }
  int size() const { return static_cast<int>(genomes_.size()); }
  std::uint32_t genome(int i) const { return genomes_[i]; }
  std::span<const std::uint32_t> genomes() const { return genomes_; }

  // Allele counts at one locus, length K, summing to n.
  std::span<const int> locus_counts(int locus) const {
    return {counts_.data() + static_cast<std::size_t>(locus) * space_.num_alleles(),
            static_cast<std::size_t>(space_.num_alleles())};
  }

  void replace(int i, std::uint32_t genome);

 private:
  AlleleSpace space_;
  std::vector<std::uint32_t> genomes_;
  std::vector<int> counts_;  // L x K row-major
};

}  // namespace evomc
