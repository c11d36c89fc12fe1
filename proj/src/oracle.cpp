#include "evomc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

#include "evomc/numeric.hpp"

namespace evomc {

namespace {

std::size_t count_state_budget(const AlleleSpace& space, int n) {
  // C(n + M - 1, M - 1), capped against kMaxCountStates.
  double states = 1.0;
  std::uint32_t m = space.num_genomes();
  for (std::uint32_t i = 1; i < m; ++i)
    states *= static_cast<double>(n + i) / i;
  if (states > static_cast<double>(kMaxCountStates))
    throw BudgetError("count-state enumeration budget exceeded");
  return static_cast<std::size_t>(states + 0.5);
}

std::size_t ordered_state_budget(const AlleleSpace& space, int n) {
  double states = 1.0;
  for (int i = 0; i < n; ++i) {
    states *= space.num_genomes();
    if (states > static_cast<double>(kMaxOrderedStates))
      throw BudgetError("ordered-state enumeration budget exceeded");
  }
  return static_cast<std::size_t>(states + 0.5);
}

// Lexicographically ascending enumeration of count vectors summing to n.
void enumerate_counts(std::uint32_t num_genomes, int n,
                      std::vector<std::vector<int>>& out) {
  std::vector<int> cur(num_genomes, 0);
  auto rec = [&](auto&& self, std::uint32_t g, int left) -> void {
    if (g + 1 == num_genomes) {
      cur[g] = left;
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      cur[g] = c;
      self(self, g + 1, left - c);
    }
  };
  rec(rec, 0, n);
}

std::vector<int> locus_counts_from_genome_counts(const AlleleSpace& space,
                                                 std::span<const int> counts) {
  std::vector<int> lc(
      static_cast<std::size_t>(space.num_loci()) * space.num_alleles(), 0);
  for (std::uint32_t g = 0; g < space.num_genomes(); ++g) {
    if (counts[g] == 0) continue;
    for (int l = 0; l < space.num_loci(); ++l)
      lc[static_cast<std::size_t>(l) * space.num_alleles() +
         space.allele_at(g, l)] += counts[g];
  }
  return lc;
}

// Probability of breeding genome y given per-locus counts over n members.
double breed_prob(const AlleleSpace& space, const ProductBreeding& breeding,
                  std::span<const int> locus_counts, int n, std::uint32_t y) {
  double p = 1.0;
  for (int l = 0; l < space.num_loci(); ++l) {
    const DirichletCategorical& proc = breeding.locus(l);
    int a = space.allele_at(y, l);
    p *= (locus_counts[static_cast<std::size_t>(l) * space.num_alleles() + a] +
          proc.alpha(a)) /
         (n + proc.alpha_total());
  }
  return p;
}

}  // namespace

int CountDistribution::index_of(std::span<const int> counts) const {
  std::vector<int> key(counts.begin(), counts.end());
  auto it = std::lower_bound(support.begin(), support.end(), key);
  if (it == support.end() || *it != key) return -1;
  return static_cast<int>(it - support.begin());
}

double CountDistribution::prob_of(std::span<const int> counts) const {
  int i = index_of(counts);
  return i < 0 ? 0.0 : probs[i];
}

std::size_t TransitionMatrix::encode(
    std::span<const std::uint32_t> genomes) const {
  std::size_t s = 0;
  for (std::size_t i = genomes.size(); i-- > 0;)
    s = s * num_genomes + genomes[i];
  return s;
}

std::vector<std::uint32_t> TransitionMatrix::decode(std::size_t state) const {
  std::vector<std::uint32_t> genomes(n);
  for (int i = 0; i < n; ++i) {
    genomes[i] = static_cast<std::uint32_t>(state % num_genomes);
    state /= num_genomes;
  }
  return genomes;
}

CountDistribution stationary_counts(const AlleleSpace& space, int n,
                                    const ProductBreeding& breeding,
                                    std::span<const double> weights) {
  if (weights.size() != space.num_genomes())
    throw std::invalid_argument("stationary_counts: weight table size mismatch");
  count_state_budget(space, n);
  CountDistribution dist;
  dist.n = n;
  dist.num_genomes = space.num_genomes();
  enumerate_counts(space.num_genomes(), n, dist.support);

  std::vector<double> log_w(weights.size());
  for (std::size_t g = 0; g < weights.size(); ++g) {
    if (!(weights[g] > 0.0))
      throw std::invalid_argument("stationary_counts: weights must be positive");
    log_w[g] = std::log(weights[g]);
  }
  std::vector<double> lp(dist.support.size());
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    const auto& c = dist.support[i];
    double v = std::lgamma(n + 1.0);
    for (std::uint32_t g = 0; g < space.num_genomes(); ++g) {
      v -= std::lgamma(c[g] + 1.0);
      v += c[g] * log_w[g];
    }
    auto lc = locus_counts_from_genome_counts(space, c);
    v += breeding.log_prob(lc, space.num_alleles());
    lp[i] = v;
  }
  double lz = log_sum_exp(lp);
  dist.probs.resize(lp.size());
  for (std::size_t i = 0; i < lp.size(); ++i) dist.probs[i] = std::exp(lp[i] - lz);
  return dist;
}

std::vector<double> stationary_ordered(const AlleleSpace& space, int n,
                                       const ProductBreeding& breeding,
                                       std::span<const double> weights) {
  std::size_t num_states = ordered_state_budget(space, n);
  TransitionMatrix codec{space.num_genomes(), n, num_states, {}};
  std::vector<double> lp(num_states);
  for (std::size_t s = 0; s < num_states; ++s) {
    auto genomes = codec.decode(s);
    Population pop(space, genomes);
    std::vector<int> lc(
        static_cast<std::size_t>(space.num_loci()) * space.num_alleles());
    for (int l = 0; l < space.num_loci(); ++l) {
      auto row = pop.locus_counts(l);
      std::copy(row.begin(), row.end(),
                lc.begin() + static_cast<std::size_t>(l) * space.num_alleles());
    }
    double v = breeding.log_prob(lc, space.num_alleles());
    for (auto g : genomes) v += std::log(weights[g]);
    lp[s] = v;
  }
  double lz = log_sum_exp(lp);
  for (double& v : lp) v = std::exp(v - lz);
  return lp;
}

std::vector<double> stationary_ordered_niche(
    const AlleleSpace& space, int n, const ProductBreeding& breeding,
    std::span<const double> niche_weights) {
  std::size_t num_states = ordered_state_budget(space, n);
  if (niche_weights.size() !=
      static_cast<std::size_t>(n) * space.num_genomes())
    throw std::invalid_argument(
        "stationary_ordered_niche: weight table size mismatch");
  TransitionMatrix codec{space.num_genomes(), n, num_states, {}};
  std::vector<double> lp(num_states);
  for (std::size_t s = 0; s < num_states; ++s) {
    auto genomes = codec.decode(s);
    Population pop(space, genomes);
    std::vector<int> lc(
        static_cast<std::size_t>(space.num_loci()) * space.num_alleles());
    for (int l = 0; l < space.num_loci(); ++l) {
      auto row = pop.locus_counts(l);
      std::copy(row.begin(), row.end(),
                lc.begin() + static_cast<std::size_t>(l) * space.num_alleles());
    }
    double v = breeding.log_prob(lc, space.num_alleles());
    for (int j = 0; j < n; ++j)
      v += std::log(
          niche_weights[static_cast<std::size_t>(j) * space.num_genomes() +
                        genomes[j]]);
    lp[s] = v;
  }
  double lz = log_sum_exp(lp);
  for (double& v : lp) v = std::exp(v - lz);
  return lp;
}

namespace {

// Recursive enumeration of breed_many ticket dynamics: every (holder pick,
// non-holder pick, outcome) path of t tournaments, with exact probability.
void enumerate_tournaments(int n, int m, int t,
                           std::span<const double> ind_weights,
                           std::vector<char>& ticket, double prob,
                           const std::function<void(const std::vector<char>&,
                                                    double)>& emit) {
  if (t == 0) {
    emit(ticket, prob);
    return;
  }
  std::vector<int> holders, nonholders;
  for (int id = 0; id < n + m; ++id)
    (ticket[id] ? holders : nonholders).push_back(id);
  double pick = 1.0 / (static_cast<double>(holders.size()) *
                       static_cast<double>(nonholders.size()));
  for (int h : holders) {
    for (int v : nonholders) {
      double p_keep = ind_weights[h] / (ind_weights[h] + ind_weights[v]);
      // holder keeps the ticket
      enumerate_tournaments(n, m, t - 1, ind_weights, ticket,
                            prob * pick * p_keep, emit);
      // ticket moves to the challenger
      ticket[h] = 0;
      ticket[v] = 1;
      enumerate_tournaments(n, m, t - 1, ind_weights, ticket,
                            prob * pick * (1.0 - p_keep), emit);
      ticket[h] = 1;
      ticket[v] = 0;
    }
  }
}

void assemble_breed_many_rows(const KernelConfig& cfg, const AlleleSpace& space,
                              int n, const ProductBreeding& breeding,
                              std::span<const double> weights,
                              TransitionMatrix& T) {
  if (!cfg.offspring.is_deterministic() || !cfg.tournaments.is_deterministic())
    throw BudgetError(
        "full_transition_matrix: breed_many requires deterministic offspring "
        "and tournament counts");
  int m = cfg.offspring.max_value();
  int t = cfg.tournaments.max_value();
  if (m > 2 || t > 2)
    throw BudgetError(
        "full_transition_matrix: breed_many enumeration limited to m <= 2, "
        "t <= 2");
  const std::uint32_t num_g = space.num_genomes();
  for (std::size_t s = 0; s < T.num_states; ++s) {
    auto genomes = T.decode(s);
    if (m == 0) {
      T.rows[s * T.num_states + s] = 1.0;
      continue;
    }
    Population pop(space, genomes);
    std::vector<int> base_lc(
        static_cast<std::size_t>(space.num_loci()) * space.num_alleles());
    for (int l = 0; l < space.num_loci(); ++l) {
      auto row = pop.locus_counts(l);
      std::copy(row.begin(), row.end(),
                base_lc.begin() +
                    static_cast<std::size_t>(l) * space.num_alleles());
    }
    // Enumerate offspring sequences with sequential urn probabilities.
    std::vector<std::uint32_t> offspring(m);
    auto rec = [&](auto&& self, int i, std::vector<int>& lc,
                   double p_seq) -> void {
      if (i == m) {
        std::vector<double> ind_w(n + m);
        for (int id = 0; id < n; ++id) ind_w[id] = weights[genomes[id]];
        for (int j = 0; j < m; ++j) ind_w[n + j] = weights[offspring[j]];
        std::vector<char> ticket(n + m, 0);
        std::fill(ticket.begin(), ticket.begin() + n, 1);
        enumerate_tournaments(
            n, m, t, ind_w, ticket, p_seq,
            [&](const std::vector<char>& tk, double p) {
              auto final_genomes = genomes;
              std::size_t next = 0;
              std::vector<int> survivors;
              for (int j = 0; j < m; ++j)
                if (tk[n + j]) survivors.push_back(j);
              for (int slot = 0; slot < n; ++slot)
                if (!tk[slot]) final_genomes[slot] = offspring[survivors[next++]];
              T.rows[s * T.num_states + T.encode(final_genomes)] += p;
            });
        return;
      }
      for (std::uint32_t y = 0; y < num_g; ++y) {
        double p = breed_prob(space, breeding, lc, n + i, y);
        offspring[i] = y;
        for (int l = 0; l < space.num_loci(); ++l)
          ++lc[static_cast<std::size_t>(l) * space.num_alleles() +
               space.allele_at(y, l)];
        self(self, i + 1, lc, p_seq * p);
        for (int l = 0; l < space.num_loci(); ++l)
          --lc[static_cast<std::size_t>(l) * space.num_alleles() +
               space.allele_at(y, l)];
      }
    };
    rec(rec, 0, base_lc, 1.0);
  }
}

}  // namespace

TransitionMatrix full_transition_matrix(const KernelConfig& cfg,
                                        const AlleleSpace& space, int n,
                                        const ProductBreeding& breeding,
                                        std::span<const double> weights,
                                        std::span<const double> niche_weights) {
  if (cfg.luck)
    throw std::invalid_argument(
        "full_transition_matrix: luck-wrapped kernels are not enumerable");
  std::size_t num_states = ordered_state_budget(space, n);
  TransitionMatrix T{space.num_genomes(), n, num_states,
                     std::vector<double>(num_states * num_states, 0.0)};
  const std::uint32_t num_g = space.num_genomes();

  if (cfg.kind == KernelKind::breed_many) {
    assemble_breed_many_rows(cfg, space, n, breeding, weights, T);
    return T;
  }
  if (cfg.kind == KernelKind::niche &&
      niche_weights.size() != static_cast<std::size_t>(n) * num_g)
    throw std::invalid_argument(
        "full_transition_matrix: niche weight table size mismatch");

  for (std::size_t s = 0; s < num_states; ++s) {
    auto genomes = T.decode(s);
    Population pop(space, genomes);
    std::vector<int> lc(
        static_cast<std::size_t>(space.num_loci()) * space.num_alleles());
    for (int l = 0; l < space.num_loci(); ++l) {
      auto row = pop.locus_counts(l);
      std::copy(row.begin(), row.end(),
                lc.begin() + static_cast<std::size_t>(l) * space.num_alleles());
    }
    double* row = T.rows.data() + s * num_states;
    for (std::uint32_t y = 0; y < num_g; ++y) {
      double pb = breed_prob(space, breeding, lc, n, y);
      switch (cfg.kind) {
        case KernelKind::single_tournament: {
          for (int i = 0; i < n; ++i) {
            double w_new = weights[y];
            double w_old = weights[genomes[i]];
            double p_acc = cfg.rule == TournamentRule::ratio
                               ? w_new / (w_new + w_old)
                               : std::min(1.0, w_new / w_old);
            auto dst = genomes;
            dst[i] = y;
            row[T.encode(dst)] += pb / n * p_acc;
            row[s] += pb / n * (1.0 - p_acc);
          }
          break;
        }
        case KernelKind::inverse_fitness: {
          double total = 1.0 / weights[y];
          for (int i = 0; i < n; ++i) total += 1.0 / weights[genomes[i]];
          row[s] += pb * (1.0 / weights[y]) / total;
          for (int i = 0; i < n; ++i) {
            auto dst = genomes;
            dst[i] = y;
            row[T.encode(dst)] += pb * (1.0 / weights[genomes[i]]) / total;
          }
          break;
        }
        case KernelKind::niche: {
          for (int j = 0; j < n; ++j) {
            double w_new =
                niche_weights[static_cast<std::size_t>(j) * num_g + y];
            double w_occ = niche_weights[static_cast<std::size_t>(j) * num_g +
                                         genomes[j]];
            double p_acc = w_new / (w_new + w_occ);
            auto dst = genomes;
            dst[j] = y;
            row[T.encode(dst)] += pb / n * p_acc;
            row[s] += pb / n * (1.0 - p_acc);
          }
          break;
        }
        case KernelKind::breed_many: break;  // handled above
      }
    }
  }
  return T;
}

BalanceReport check_detailed_balance(std::span<const double> pi,
                                     const TransitionMatrix& T) {
  if (pi.size() != T.num_states)
    throw std::invalid_argument("check_detailed_balance: dimension mismatch");
  BalanceReport rep;
  for (std::size_t i = 0; i < T.num_states; ++i) {
    for (std::size_t j = i + 1; j < T.num_states; ++j) {
      double v = std::abs(pi[i] * T.at(i, j) - pi[j] * T.at(j, i));
      if (v > rep.max_violation) {
        rep.max_violation = v;
        rep.argmax_from = i;
        rep.argmax_to = j;
      }
    }
  }
  return rep;
}

std::vector<double> power_iteration(const TransitionMatrix& T, double tol,
                                    int max_iters) {
  std::size_t ns = T.num_states;
  std::vector<double> v(ns, 1.0 / static_cast<double>(ns));
  std::vector<double> next(ns);
  for (int it = 0; it < max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
      double vi = v[i];
      if (vi == 0.0) continue;
      const double* row = T.rows.data() + i * ns;
      for (std::size_t j = 0; j < ns; ++j) next[j] += vi * row[j];
    }
    double mass = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& x : next) x /= mass;
    double diff = 0.0;
    for (std::size_t j = 0; j < ns; ++j) diff += std::abs(next[j] - v[j]);
    v.swap(next);
    if (diff < tol) return v;
  }
  throw ConvergenceError("power_iteration: no convergence within max_iters");
}

CountDistribution lump_to_counts(const AlleleSpace& space, int n,
                                 std::span<const double> ordered_probs) {
  std::size_t num_states = ordered_state_budget(space, n);
  if (ordered_probs.size() != num_states)
    throw std::invalid_argument("lump_to_counts: distribution size mismatch");
  TransitionMatrix codec{space.num_genomes(), n, num_states, {}};
  std::map<std::vector<int>, double> acc;
  for (std::size_t s = 0; s < num_states; ++s) {
    auto genomes = codec.decode(s);
    std::vector<int> counts(space.num_genomes(), 0);
    for (auto g : genomes) ++counts[g];
    acc[counts] += ordered_probs[s];
  }
  CountDistribution dist;
  dist.n = n;
  dist.num_genomes = space.num_genomes();
  for (auto& [c, p] : acc) {
    dist.support.push_back(c);
    dist.probs.push_back(p);
  }
  return dist;
}

double marginal_probability(const CountDistribution& dist,
                            std::span<const std::uint32_t> genomes) {
  if (static_cast<int>(genomes.size()) > dist.n)
    throw std::invalid_argument("marginal_probability: prefix longer than n");
  double total = 0.0;
  std::vector<int> used(dist.num_genomes);
  for (std::size_t i = 0; i < dist.support.size(); ++i) {
    std::fill(used.begin(), used.end(), 0);
    double factor = 1.0;
    for (std::size_t j = 0; j < genomes.size(); ++j) {
      std::uint32_t g = genomes[j];
      factor *= static_cast<double>(dist.support[i][g] - used[g]) /
                static_cast<double>(dist.n - static_cast<int>(j));
      ++used[g];
      if (factor <= 0.0) {
        factor = 0.0;
        break;
      }
    }
    total += dist.probs[i] * factor;
  }
  return total;
}

}  // namespace evomc
