#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evomc/breeding.hpp"
#include "evomc/genotype.hpp"
#include "evomc/rng.hpp"

namespace evomc {

enum class KernelKind { single_tournament, inverse_fitness, breed_many, niche };
enum class TournamentRule { ratio, metropolis_min };

// Discrete distribution over non-negative integers (offspring and tournament
// counts for the breed_many kernel).
class IntDistribution {
 public:
  IntDistribution(std::vector<int> values, std::vector<double> weights);
  static IntDistribution deterministic(int value);

  int sample(SplitMix64& rng) const;
  bool is_deterministic() const { return values_.size() == 1; }
  int max_value() const;
  std::span<const int> values() const { return values_; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<int> values_;
  std::vector<double> probs_;  // normalized
};

// Finite distribution of per-individual log-luck, drawn once at birth. An
// individual's effective weight is w(genome) * exp(-psi) for its whole life.
struct LuckConfig {
  std::vector<double> values;
  std::vector<double> probs;

  void validate() const;
  int sample_index(SplitMix64& rng) const;
};

struct KernelConfig {
  KernelKind kind = KernelKind::single_tournament;
  TournamentRule rule = TournamentRule::ratio;
  IntDistribution offspring = IntDistribution::deterministic(1);    // breed_many
  IntDistribution tournaments = IntDistribution::deterministic(1);  // breed_many
  std::optional<LuckConfig> luck;

  void validate() const;
};

// Attach a luck distribution to a kernel; only the kernels whose tournaments
// consult individual weights directly support it.
KernelConfig wrap_with_luck(KernelConfig base, LuckConfig luck);

// One population evolving under a fixed kernel. Owns the mutable state a
// generation step touches: the population, per-individual luck, an optional
// (genome, luck)-class member index for O(1) inverse-fitness ejection, and
// scratch buffers for breed_many.
class Chain {
 public:
  // `genome_weights` has one entry per genome in pop.space(); `niche_weights`
  // is row-major n x num_genomes and required exactly for the niche kernel.
  // `rng` supplies birth luck for the initial population when luck is on.
  Chain(Population pop, ProductBreeding breeding, KernelConfig cfg,
        std::vector<double> genome_weights, std::vector<double> niche_weights,
        SplitMix64& rng);

  void step(SplitMix64& rng);

  const Population& population() const { return pop_; }
  int size() const { return pop_.size(); }
  double psi(int i) const;
  int psi_index(int i) const { return psi_idx_[i]; }
  double effective_weight(int i) const;
  // Per-genome class counts; maintained whenever the genome space is small
  // enough to index (empty otherwise).
  std::span<const int> genome_counts() const { return genome_counts_; }

 private:
  void step_single_tournament(SplitMix64& rng);
  void step_inverse_fitness(SplitMix64& rng);
  void step_breed_many(SplitMix64& rng);
  void step_niche(SplitMix64& rng);
  void replace(int slot, std::uint32_t genome, int psi_idx);
  int class_id(std::uint32_t genome, int psi_idx) const;

  Population pop_;
  ProductBreeding breeding_;
  KernelConfig cfg_;
  std::vector<double> w_;            // per genome
  std::vector<double> niche_w_;      // n x num_genomes, niche kernel only
  std::vector<double> luck_factor_;  // exp(-psi) per luck index; {1} if no luck
  std::vector<int> psi_idx_;         // per slot
  std::vector<int> genome_counts_;   // per genome, empty if space too large

  // (genome, luck)-class membership index for weighted ejection sampling.
  bool indexed_ = false;
  std::vector<std::vector<int>> members_;  // class id -> slots
  std::vector<int> slot_pos_;              // slot -> position in its class

  // breed_many scratch, reused across steps.
  std::vector<int> ext_counts_;
  std::vector<std::uint32_t> offspring_;
  std::vector<int> holders_, nonholders_, id_pos_;
  std::vector<char> has_ticket_;
  std::vector<int> ejected_slots_, surviving_offspring_;
};

}  // namespace evomc
