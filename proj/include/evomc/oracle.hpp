#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "evomc/breeding.hpp"
#include "evomc/genotype.hpp"
#include "evomc/kernels.hpp"

namespace evomc {

// Exact probability measure over genome count vectors (entries indexed by
// genome, summing to n).
struct CountDistribution {
  int n = 0;
  std::uint32_t num_genomes = 0;
  std::vector<std::vector<int>> support;
  std::vector<double> probs;

  int index_of(std::span<const int> counts) const;  // -1 if absent
  double prob_of(std::span<const int> counts) const;
};

// Dense one-step kernel over ordered populations in X^n. States are encoded
// as base-M integers with individual 0 in the least significant digit.
struct TransitionMatrix {
  std::uint32_t num_genomes = 0;
  int n = 0;
  std::size_t num_states = 0;
  std::vector<double> rows;  // num_states x num_states, row-major

  double at(std::size_t from, std::size_t to) const {
    return rows[from * num_states + to];
  }
  std::size_t encode(std::span<const std::uint32_t> genomes) const;
  std::vector<std::uint32_t> decode(std::size_t state) const;
};

// Hard enumeration budgets; exceeding them raises BudgetError.
inline constexpr std::size_t kMaxOrderedStates = 20000;
inline constexpr std::size_t kMaxCountStates = 2000000;

// Exact stationary distribution over genome count vectors: multinomial
// coefficient x breeding sequence probability x product of weights, assembled
// in log space and normalized.
CountDistribution stationary_counts(const AlleleSpace& space, int n,
                                    const ProductBreeding& breeding,
                                    std::span<const double> weights);

// Stationary distribution over ordered states (breeding law times the product
// of individual weights), normalized.
std::vector<double> stationary_ordered(const AlleleSpace& space, int n,
                                       const ProductBreeding& breeding,
                                       std::span<const double> weights);

// Ordered-state stationary law for the niche kernel: breeding law times
// per-slot weight tables (row-major n x num_genomes).
std::vector<double> stationary_ordered_niche(
    const AlleleSpace& space, int n, const ProductBreeding& breeding,
    std::span<const double> niche_weights);

// Exact one-step transition matrix for a kernel on ordered states. breed_many
// requires deterministic offspring/tournament counts with m <= 2 and t <= 2.
TransitionMatrix full_transition_matrix(const KernelConfig& cfg,
                                        const AlleleSpace& space, int n,
                                        const ProductBreeding& breeding,
                                        std::span<const double> weights,
                                        std::span<const double> niche_weights = {});

struct BalanceReport {
  double max_violation = 0.0;
  std::size_t argmax_from = 0;
  std::size_t argmax_to = 0;
};

BalanceReport check_detailed_balance(std::span<const double> pi,
                                     const TransitionMatrix& T);

// Stationary vector by iterating v <- vT from the uniform vector until
// ||vT - v||_1 < tol.
std::vector<double> power_iteration(const TransitionMatrix& T,
                                    double tol = 1e-13,
                                    int max_iters = 200000);

// Project an ordered-state distribution onto genome count vectors.
CountDistribution lump_to_counts(const AlleleSpace& space, int n,
                                 std::span<const double> ordered_probs);

// P(X_1 = g_1, ..., X_m = g_m) for an exchangeable population with count law
// `dist`, by sub-sampling without replacement (falling-factorial weights).
double marginal_probability(const CountDistribution& dist,
                            std::span<const std::uint32_t> genomes);

}  // namespace evomc
