#include "evomc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evomc {

IntDistribution::IntDistribution(std::vector<int> values,
                                 std::vector<double> weights)
    : values_(std::move(values)), probs_(std::move(weights)) {
  if (values_.empty() || values_.size() != probs_.size())
    throw std::invalid_argument("IntDistribution: empty or mismatched arrays");
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0)
      throw std::invalid_argument("IntDistribution: negative value");
    if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i]))
      throw std::invalid_argument("IntDistribution: bad weight");
    total += probs_[i];
  }
  if (!(total > 0.0))
    throw std::invalid_argument("IntDistribution: weights sum to zero");
  for (double& p : probs_) p /= total;
}

IntDistribution IntDistribution::deterministic(int value) {
  return IntDistribution({value}, {1.0});
}

int IntDistribution::sample(SplitMix64& rng) const {
  if (values_.size() == 1) return values_[0];
  double x = rng.uniform_double();
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    if (x < probs_[i]) return values_[i];
    x -= probs_[i];
  }
  return values_.back();
}

int IntDistribution::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

void LuckConfig::validate() const {
  if (values.empty() || values.size() != probs.size())
    throw std::invalid_argument("LuckConfig: empty or mismatched arrays");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("LuckConfig: non-finite luck value");
    if (!(probs[i] >= 0.0))
      throw std::invalid_argument("LuckConfig: negative probability");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("LuckConfig: probabilities must sum to 1");
}

int LuckConfig::sample_index(SplitMix64& rng) const {
  double x = rng.uniform_double();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (x < probs[i]) return static_cast<int>(i);
    x -= probs[i];
  }
  return static_cast<int>(values.size()) - 1;
}

void KernelConfig::validate() const {
  if (luck) {
    luck->validate();
    if (kind != KernelKind::single_tournament &&
        kind != KernelKind::inverse_fitness)
      throw std::invalid_argument(
          "KernelConfig: luck supports only single_tournament and "
          "inverse_fitness");
  }
}

KernelConfig wrap_with_luck(KernelConfig base, LuckConfig luck) {
  base.luck = std::move(luck);
  base.validate();
  return base;
}

namespace {
// Class index is worth maintaining only while the table stays small.
constexpr std::size_t kMaxIndexedClasses = 4096;
constexpr std::size_t kMaxCountedGenomes = 65536;
}  // namespace

Chain::Chain(Population pop, ProductBreeding breeding, KernelConfig cfg,
             std::vector<double> genome_weights,
             std::vector<double> niche_weights, SplitMix64& rng)
    : pop_(std::move(pop)),
      breeding_(std::move(breeding)),
      cfg_(std::move(cfg)),
      w_(std::move(genome_weights)),
      niche_w_(std::move(niche_weights)) {
  cfg_.validate();
  const std::uint32_t m = pop_.space().num_genomes();
  if (w_.size() != m)
    throw std::invalid_argument("Chain: genome weight table size mismatch");
  for (double w : w_)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("Chain: weights must be positive finite");
  if (cfg_.kind == KernelKind::niche) {
    if (niche_w_.size() != static_cast<std::size_t>(pop_.size()) * m)
      throw std::invalid_argument("Chain: niche weight table size mismatch");
    for (double w : niche_w_)
      if (!(w > 0.0) || !std::isfinite(w))
        throw std::invalid_argument("Chain: niche weights must be positive");
  } else if (!niche_w_.empty()) {
    throw std::invalid_argument("Chain: niche weights given to non-niche kernel");
  }

  int num_psi = 1;
  if (cfg_.luck) {
    num_psi = static_cast<int>(cfg_.luck->values.size());
    luck_factor_.resize(num_psi);
    for (int p = 0; p < num_psi; ++p)
      luck_factor_[p] = std::exp(-cfg_.luck->values[p]);
  } else {
    luck_factor_ = {1.0};
  }

  psi_idx_.assign(pop_.size(), 0);
  if (cfg_.luck)
    for (int i = 0; i < pop_.size(); ++i)
      psi_idx_[i] = cfg_.luck->sample_index(rng);

  if (m <= kMaxCountedGenomes) {
    genome_counts_.assign(m, 0);
    for (int i = 0; i < pop_.size(); ++i) ++genome_counts_[pop_.genome(i)];
  }

  std::size_t num_classes = static_cast<std::size_t>(m) * num_psi;
  if (num_classes <= kMaxIndexedClasses) {
    indexed_ = true;
    members_.assign(num_classes, {});
    slot_pos_.assign(pop_.size(), -1);
    for (int i = 0; i < pop_.size(); ++i) {
      auto& cls = members_[class_id(pop_.genome(i), psi_idx_[i])];
      slot_pos_[i] = static_cast<int>(cls.size());
      cls.push_back(i);
    }
  }

  if (cfg_.kind == KernelKind::breed_many) {
    ext_counts_.resize(static_cast<std::size_t>(pop_.space().num_loci()) *
                       pop_.space().num_alleles());
    int max_m = cfg_.offspring.max_value();
    offspring_.reserve(max_m);
    holders_.reserve(pop_.size());
    nonholders_.reserve(max_m);
    id_pos_.resize(pop_.size() + max_m);
    has_ticket_.resize(pop_.size() + max_m);
    ejected_slots_.reserve(pop_.size());
    surviving_offspring_.reserve(max_m);
  }
}

int Chain::class_id(std::uint32_t genome, int psi_idx) const {
  return static_cast<int>(genome) * static_cast<int>(luck_factor_.size()) +
         psi_idx;
}

double Chain::psi(int i) const {
  return cfg_.luck ? cfg_.luck->values[psi_idx_[i]] : 0.0;
}

double Chain::effective_weight(int i) const {
  return w_[pop_.genome(i)] * luck_factor_[psi_idx_[i]];
}

void Chain::replace(int slot, std::uint32_t genome, int psi_idx) {
  if (indexed_) {
    auto& old_cls = members_[class_id(pop_.genome(slot), psi_idx_[slot])];
    int pos = slot_pos_[slot];
    int moved = old_cls.back();
    old_cls[pos] = moved;
    slot_pos_[moved] = pos;
    old_cls.pop_back();
    auto& new_cls = members_[class_id(genome, psi_idx)];
    slot_pos_[slot] = static_cast<int>(new_cls.size());
    new_cls.push_back(slot);
  }
  if (!genome_counts_.empty()) {
    --genome_counts_[pop_.genome(slot)];
    ++genome_counts_[genome];
  }
  pop_.replace(slot, genome);
  psi_idx_[slot] = psi_idx;
}

void Chain::step(SplitMix64& rng) {
  switch (cfg_.kind) {
    case KernelKind::single_tournament: step_single_tournament(rng); break;
    case KernelKind::inverse_fitness: step_inverse_fitness(rng); break;
    case KernelKind::breed_many: step_breed_many(rng); break;
    case KernelKind::niche: step_niche(rng); break;
  }
}

// Draw order per step: breeding (one uniform per locus), then birth luck if
// configured, then victim index, then one acceptance uniform (always
// consumed, so trajectories with equal seeds stay aligned across rules).
void Chain::step_single_tournament(SplitMix64& rng) {
  GenomeDraw d = breed_genome(pop_, breeding_, rng);
  int new_psi = cfg_.luck ? cfg_.luck->sample_index(rng) : 0;
  int victim = static_cast<int>(rng.uniform_index(pop_.size()));
  double u = rng.uniform_double();
  double w_new = w_[d.genome] * luck_factor_[new_psi];
  double w_old = effective_weight(victim);
  double p_win = cfg_.rule == TournamentRule::ratio
                     ? w_new / (w_new + w_old)
                     : std::min(1.0, w_new / w_old);
  if (u < p_win) replace(victim, d.genome, new_psi);
}

void Chain::step_inverse_fitness(SplitMix64& rng) {
  GenomeDraw d = breed_genome(pop_, breeding_, rng);
  int new_psi = cfg_.luck ? cfg_.luck->sample_index(rng) : 0;
  double inv_new = 1.0 / (w_[d.genome] * luck_factor_[new_psi]);
  double u = rng.uniform_double();

  if (indexed_) {
    // Ejection mass grouped by (genome, luck) class: count / weight.
    double total = inv_new;
    for (std::size_t c = 0; c < members_.size(); ++c) {
      if (members_[c].empty()) continue;
      std::uint32_t g = static_cast<std::uint32_t>(c / luck_factor_.size());
      double wc = w_[g] * luck_factor_[c % luck_factor_.size()];
      total += members_[c].size() / wc;
    }
    double x = u * total;
    for (std::size_t c = 0; c < members_.size(); ++c) {
      if (members_[c].empty()) continue;
      std::uint32_t g = static_cast<std::uint32_t>(c / luck_factor_.size());
      double inv_w = 1.0 / (w_[g] * luck_factor_[c % luck_factor_.size()]);
      double slab = members_[c].size() * inv_w;
      if (x < slab) {
        auto idx = static_cast<std::size_t>(x / inv_w);
        if (idx >= members_[c].size()) idx = members_[c].size() - 1;
        replace(members_[c][idx], d.genome, new_psi);
        return;
      }
      x -= slab;
    }
    return;  // newborn ejected; population unchanged
  }

  double total = inv_new;
  for (int i = 0; i < pop_.size(); ++i) total += 1.0 / effective_weight(i);
  double x = u * total;
  for (int i = 0; i < pop_.size(); ++i) {
    double slab = 1.0 / effective_weight(i);
    if (x < slab) {
      replace(i, d.genome, new_psi);
      return;
    }
    x -= slab;
  }
  // newborn ejected; population unchanged
}

void Chain::step_breed_many(SplitMix64& rng) {
  const AlleleSpace& space = pop_.space();
  const int n = pop_.size();
  const int m = cfg_.offspring.sample(rng);
  const int t = cfg_.tournaments.sample(rng);

  offspring_.clear();
  for (int l = 0; l < space.num_loci(); ++l) {
    auto src = pop_.locus_counts(l);
    std::copy(src.begin(), src.end(),
              ext_counts_.begin() + static_cast<std::size_t>(l) * space.num_alleles());
  }
  for (int i = 0; i < m; ++i) {
    GenomeDraw d = breed_genome(space, ext_counts_, n + i, breeding_, rng);
    offspring_.push_back(d.genome);
    for (int l = 0; l < space.num_loci(); ++l)
      ++ext_counts_[static_cast<std::size_t>(l) * space.num_alleles() +
                    space.allele_at(d.genome, l)];
  }
  if (m == 0) return;  // no challengers; tournaments are no-ops

  // ids: 0..n-1 incumbents (slot == id), n..n+m-1 offspring in birth order.
  holders_.resize(n);
  nonholders_.resize(m);
  for (int i = 0; i < n; ++i) {
    holders_[i] = i;
    id_pos_[i] = i;
    has_ticket_[i] = 1;
  }
  for (int j = 0; j < m; ++j) {
    nonholders_[j] = n + j;
    id_pos_[n + j] = j;
    has_ticket_[n + j] = 0;
  }
  auto weight_of = [&](int id) {
    return id < n ? w_[pop_.genome(id)] : w_[offspring_[id - n]];
  };
  for (int r = 0; r < t; ++r) {
    int hi = static_cast<int>(rng.uniform_index(n));
    int vi = static_cast<int>(rng.uniform_index(m));
    double u = rng.uniform_double();
    int h = holders_[hi];
    int v = nonholders_[vi];
    double wh = weight_of(h);
    if (u >= wh / (wh + weight_of(v))) {
      holders_[hi] = v;
      nonholders_[vi] = h;
      id_pos_[v] = hi;
      id_pos_[h] = vi;
      has_ticket_[v] = 1;
      has_ticket_[h] = 0;
    }
  }

  // Surviving incumbents keep their slots; ejected slots are refilled by
  // surviving offspring in birth order.
  ejected_slots_.clear();
  for (int i = 0; i < n; ++i)
    if (!has_ticket_[i]) ejected_slots_.push_back(i);
  surviving_offspring_.clear();
  for (int j = 0; j < m; ++j)
    if (has_ticket_[n + j]) surviving_offspring_.push_back(j);
  for (std::size_t j = 0; j < ejected_slots_.size(); ++j)
    replace(ejected_slots_[j], offspring_[surviving_offspring_[j]], 0);
}

void Chain::step_niche(SplitMix64& rng) {
  GenomeDraw d = breed_genome(pop_, breeding_, rng);
  int niche = static_cast<int>(rng.uniform_index(pop_.size()));
  double u = rng.uniform_double();
  const std::uint32_t m = pop_.space().num_genomes();
  double w_new = niche_w_[static_cast<std::size_t>(niche) * m + d.genome];
  double w_occ =
      niche_w_[static_cast<std::size_t>(niche) * m + pop_.genome(niche)];
  if (u < w_new / (w_new + w_occ)) replace(niche, d.genome, 0);
}

}  // namespace evomc
