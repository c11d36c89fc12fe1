#include "evomc/genotype.hpp"

#include <cmath>
#include <stdexcept>

namespace evomc {

AlleleSpace::AlleleSpace(int num_alleles, int num_loci)
    : k_(num_alleles), l_(num_loci) {
  if (k_ < 2) throw std::invalid_argument("AlleleSpace: need at least 2 alleles");
  if (l_ < 1) throw std::invalid_argument("AlleleSpace: need at least 1 locus");
  pow_.resize(l_ + 1);
  pow_[0] = 1;
  for (int i = 0; i < l_; ++i) {
    std::uint64_t next = static_cast<std::uint64_t>(pow_[i]) * k_;
    if (next > (1u << 31))
      throw std::invalid_argument("AlleleSpace: K^L exceeds 2^31");
    pow_[i + 1] = static_cast<std::uint32_t>(next);
  }
  size_ = pow_[l_];
}

std::uint32_t AlleleSpace::encode(std::span<const int> alleles) const {
  if (static_cast<int>(alleles.size()) != l_)
    throw std::invalid_argument("AlleleSpace::encode: wrong number of loci");
  std::uint32_t g = 0;
  for (int i = 0; i < l_; ++i) {
    if (alleles[i] < 0 || alleles[i] >= k_)
      throw std::invalid_argument("AlleleSpace::encode: allele out of range");
    g += pow_[i] * static_cast<std::uint32_t>(alleles[i]);
  }
  return g;
}

std::vector<int> AlleleSpace::decode(std::uint32_t genome) const {
  if (genome >= size_)
    throw std::invalid_argument("AlleleSpace::decode: genome out of range");
  std::vector<int> out(l_);
  for (int i = 0; i < l_; ++i) out[i] = allele_at(genome, i);
  return out;
}

SimplexPoint::SimplexPoint(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("SimplexPoint: empty");
  double sum = 0.0;
  for (double& v : values_) {
    if (!std::isfinite(v) || v < -1e-12)
      throw std::invalid_argument("SimplexPoint: negative or non-finite entry");
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("SimplexPoint: entries do not sum to 1");
  for (double& v : values_) v /= sum;
}

std::vector<double> scaled_weights(std::span<const double> phi, double n,
                                   double lambda) {
  if (!(n > 0.0)) throw std::invalid_argument("scaled_weights: n must be positive");
  if (!(lambda >= 0.0))
    throw std::invalid_argument("scaled_weights: lambda must be >= 0");
  std::vector<double> w(phi.size());
  double scale = std::pow(n, lambda);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (!(phi[i] >= 0.0) || !std::isfinite(phi[i]))
      throw std::invalid_argument("scaled_weights: cost must be >= 0 and finite");
    w[i] = std::exp(-phi[i] / scale);
  }
  return w;
}

std::vector<double> r_map(std::span<const double> q,
                          std::span<const double> w) {
  if (q.size() != w.size()) throw std::invalid_argument("r_map: size mismatch");
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!(w[i] > 0.0)) throw std::invalid_argument("r_map: weights must be positive");
    z += q[i] * w[i];
  }
  if (!(z > 0.0)) throw std::invalid_argument("r_map: degenerate distribution");
  std::vector<double> r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = q[i] * w[i] / z;
  return r;
}

Population::Population(const AlleleSpace& space,
                       std::vector<std::uint32_t> genomes)
    : space_(space), genomes_(std::move(genomes)) {
  if (genomes_.empty()) throw std::invalid_argument("Population: empty");
  counts_.assign(static_cast<std::size_t>(space_.num_loci()) *
                     space_.num_alleles(),
                 0);
  for (std::uint32_t g : genomes_) {
    if (g >= space_.num_genomes())
      throw std::invalid_argument("Population: genome out of range");
    for (int l = 0; l < space_.num_loci(); ++l)
      ++counts_[static_cast<std::size_t>(l) * space_.num_alleles() +
                space_.allele_at(g, l)];
  }
}

void Population::replace(int i, std::uint32_t genome) {
  if (genome >= space_.num_genomes())
    throw std::invalid_argument("Population::replace: genome out of range");
  std::uint32_t old = genomes_[i];
  if (old == genome) return;
  for (int l = 0; l < space_.num_loci(); ++l) {
    --counts_[static_cast<std::size_t>(l) * space_.num_alleles() +
              space_.allele_at(old, l)];
    ++counts_[static_cast<std::size_t>(l) * space_.num_alleles() +
              space_.allele_at(genome, l)];
  }
  genomes_[i] = genome;
}

}  // namespace evomc
