#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evomc {

// Large-population limit of the stationary type-frequency law, single locus.
//
// Flat-scaling regime (exponent 0): q*(k) = alpha_k / ((1 + |alpha|) - w_k /
// theta) with theta the unique root of sum_k q*(k) = 1 inside
// (max_k w_k / (1 + |alpha|), max_k w_k]; theta equals <w, q*> at the root.
struct Lambda0Solution {
  std::vector<double> q_star;
  std::vector<double> r_star;  // selection-tilted point: r*(k) ~ q*(k) w_k
  double theta = 0.0;          // mean weight under q*
};

// Intermediate-scaling regime (exponent strictly between 0 and 1):
// q*(k) = alpha_k / (phi_k + |alpha| - theta) with theta in
// [min phi, min phi + |alpha|); theta equals <phi, q*> at the root.
struct LambdaMidSolution {
  std::vector<double> q_star;
  double theta = 0.0;  // mean cost under q*
};

Lambda0Solution solve_qstar_lambda0(std::span<const double> alpha,
                                    std::span<const double> weights);
LambdaMidSolution solve_qstar_lambda_mid(std::span<const double> alpha,
                                         std::span<const double> phi);

// Finite-interpolation family: the flat-regime solution computed for prior
// alpha/m and weights exp(-phi/m).  As m grows, q_star approaches the
// intermediate-regime solution for (alpha, phi).
Lambda0Solution qstar_m(std::span<const double> alpha,
                        std::span<const double> phi, double m);

// Continuous limit density over the two-type frequency simplex:
// f(q) proportional to exp(-<phi, q>) * prod_k q_k^{alpha_k - 1}.
// For two types, quadrature gives exact normalization and bin masses in the
// chosen coordinate.  For more types, bin masses of a single coordinate are
// estimated by importance sampling against the untilted Dirichlet law.
class DensityPrediction {
 public:
  DensityPrediction(std::vector<double> alpha, std::vector<double> phi);

  // Probability masses of `bins` equal-width bins of [0,1] for the frequency
  // of allele `coordinate` (0-based).
  std::vector<double> bin_masses(int coordinate, int bins) const;

  // Unnormalized-to-normalized constant: integral of
  // exp(-<phi,q>) Dirichlet(alpha)(q) over the simplex.
  double tilt_normalizer() const { return tilt_z_; }

  // Log density of a full frequency vector (two-type case only), with
  // respect to the Lebesgue measure in the coordinate q[1].
  double log_density(std::span<const double> q) const;

  double coordinate_mean(int coordinate) const;

  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& phi() const { return phi_; }

 private:
  std::vector<double> alpha_;
  std::vector<double> phi_;
  double tilt_z_ = 1.0;
};

// --- Two-locus, two-allele product analysis -------------------------------

enum class ProductRegime { lambda0, lambda_mid };

// Interior stationary point of the product-form rate function, in the
// coordinates z1 = P(first allele at locus 1), z2 = P(first allele at
// locus 2), together with the Hessian of the rate function there.
struct ProductMinimum {
  double z1 = 0.0;
  double z2 = 0.0;
  double h11 = 0.0;
  double h12 = 0.0;
  double h22 = 0.0;
  double det = 0.0;
  double objective = 0.0;
};

struct HessianReport {
  ProductRegime regime = ProductRegime::lambda_mid;
  bool convexity_certified = false;
  double certificate_lhs = 0.0;
  double certificate_rhs = 0.0;
  std::vector<ProductMinimum> minima;  // sorted by (z1, z2)
  std::vector<double> weights;         // Laplace mixture weights, sum to 1
  int rejected = 0;  // multistart solutions discarded (boundary/saddle/fail)
};

// alpha/beta: two-entry priors for locus 1 and locus 2.  phi: four costs in
// genome order, locus 1 least significant (entries for allele pairs
// (1,1),(2,1),(1,2),(2,2)).  In the flat regime, weights are exp(-phi).
HessianReport product_limit_k2l2(ProductRegime regime,
                                 std::span<const double> alpha,
                                 std::span<const double> beta,
                                 std::span<const double> phi);

// --- Unified prediction front-end ------------------------------------------

enum class PriorScaling { fixed, scaled };

enum class LimitRegime { lambda0, lambda_mid, lambda1, lambda_gt1 };

std::string to_string(LimitRegime regime);
std::string to_string(ProductRegime regime);

struct MixtureComponent {
  double weight = 1.0;
  // Per-locus allele-frequency vectors (L rows of K entries).
  std::vector<std::vector<double>> locus_marginals;
};

struct LimitPrediction {
  LimitRegime regime = LimitRegime::lambda0;
  // Point-mass or mixture-of-point-mass regimes.
  std::vector<MixtureComponent> components;
  // Continuous regimes carry a density instead.
  std::optional<DensityPrediction> density;
  std::optional<HessianReport> product_report;
  double theta = 0.0;

  // Predicted stationary frequency of `allele` at `locus` (0-based), valid
  // when the prediction is a single point mass.
  double frequency_point(int locus, int allele) const;
};

struct LimitConfig {
  int num_alleles = 2;
  int num_loci = 1;
  std::vector<std::vector<double>> alpha;  // one row per locus
  std::vector<double> phi;                 // K^L entries, genome order
  double lambda = 0.0;
  PriorScaling prior_scaling = PriorScaling::scaled;
};

LimitPrediction predict_limit(const LimitConfig& config);

}  // namespace evomc
