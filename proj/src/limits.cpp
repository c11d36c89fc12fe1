#include "evomc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "evomc/genotype.hpp"
#include "evomc/numeric.hpp"
#include "evomc/rng.hpp"

namespace evomc {

namespace {

void validate_alpha(std::span<const double> alpha, const char* where) {
  if (alpha.size() < 2)
    throw std::invalid_argument(std::string(where) + ": need at least two types");
  for (double a : alpha)
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument(std::string(where) +
                                  ": prior pseudo-counts must be positive");
}

void validate_phi(std::span<const double> phi, const char* where) {
  for (double p : phi)
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument(std::string(where) +
                                  ": costs must be finite and non-negative");
}

double bisect_then_newton(const std::function<double(double)>& s,
                          const std::function<double(double)>& ds, double lo,
                          double hi, bool increasing) {
  // Invariant: the root of s(theta) = 1 lies in (lo, hi).  Endpoints are
  // never evaluated; one of them may be a pole of s.
  double width_scale = std::max(1.0, std::abs(lo) + std::abs(hi));
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * width_scale; ++it) {
    double mid = 0.5 * (lo + hi);
    bool root_right = increasing ? (s(mid) < 1.0) : (s(mid) > 1.0);
    if (root_right)
      lo = mid;
    else
      hi = mid;
  }
  double theta = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double step = (s(theta) - 1.0) / ds(theta);
    double next = theta - step;
    if (!(next > lo) || !(next < hi)) break;
    theta = next;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(theta))) break;
  }
  return theta;
}

}  // namespace

Lambda0Solution solve_qstar_lambda0(std::span<const double> alpha,
                                    std::span<const double> weights) {
  validate_alpha(alpha, "solve_qstar_lambda0");
  if (weights.size() != alpha.size())
    throw std::invalid_argument("solve_qstar_lambda0: size mismatch");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument(
          "solve_qstar_lambda0: weights must be positive finite");
  const std::size_t k = alpha.size();
  double total_alpha = 0.0;
  for (double a : alpha) total_alpha += a;
  double w_max = *std::max_element(weights.begin(), weights.end());

  auto s_fn = [&](double theta) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      s += alpha[i] / ((1.0 + total_alpha) - weights[i] / theta);
    return s;
  };
  auto ds_fn = [&](double theta) {
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double den = (1.0 + total_alpha) - weights[i] / theta;
      d -= alpha[i] * weights[i] / (theta * theta * den * den);
    }
    return d;
  };

  double hi = w_max;
  double lo = w_max / (1.0 + total_alpha);
  double s_hi = s_fn(hi);
  if (s_hi > 1.0 + 1e-9)
    throw ConvergenceError("solve_qstar_lambda0: root bracket failed");
  double theta;
  if (s_hi >= 1.0 - 1e-12) {
    theta = w_max;  // constant-weight edge: the root sits at the endpoint
  } else {
    theta = bisect_then_newton(s_fn, ds_fn, lo, hi, /*increasing=*/false);
  }

  Lambda0Solution sol;
  sol.theta = theta;
  sol.q_star.resize(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sol.q_star[i] = alpha[i] / ((1.0 + total_alpha) - weights[i] / theta);
    total += sol.q_star[i];
  }
  for (double& q : sol.q_star) q /= total;
  sol.r_star = r_map(sol.q_star, weights);
  return sol;
}

LambdaMidSolution solve_qstar_lambda_mid(std::span<const double> alpha,
                                         std::span<const double> phi) {
  validate_alpha(alpha, "solve_qstar_lambda_mid");
  if (phi.size() != alpha.size())
    throw std::invalid_argument("solve_qstar_lambda_mid: size mismatch");
  validate_phi(phi, "solve_qstar_lambda_mid");
  const std::size_t k = alpha.size();
  double total_alpha = 0.0;
  for (double a : alpha) total_alpha += a;
  double phi_min = *std::min_element(phi.begin(), phi.end());

  auto s_fn = [&](double theta) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      s += alpha[i] / (phi[i] + total_alpha - theta);
    return s;
  };
  auto ds_fn = [&](double theta) {
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double den = phi[i] + total_alpha - theta;
      d += alpha[i] / (den * den);
    }
    return d;
  };

  double lo = phi_min;
  double hi = phi_min + total_alpha;
  double s_lo = s_fn(lo);
  if (s_lo > 1.0 + 1e-9)
    throw ConvergenceError("solve_qstar_lambda_mid: root bracket failed");
  double theta;
  if (s_lo >= 1.0 - 1e-12) {
    theta = phi_min;  // constant-cost edge
  } else {
    theta = bisect_then_newton(s_fn, ds_fn, lo, hi, /*increasing=*/true);
  }

  LambdaMidSolution sol;
  sol.theta = theta;
  sol.q_star.resize(k);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sol.q_star[i] = alpha[i] / (phi[i] + total_alpha - theta);
    total += sol.q_star[i];
  }
  for (double& q : sol.q_star) q /= total;
  return sol;
}

Lambda0Solution qstar_m(std::span<const double> alpha,
                        std::span<const double> phi, double m) {
  if (!(m > 0.0) || !std::isfinite(m))
    throw std::invalid_argument("qstar_m: m must be positive finite");
  validate_alpha(alpha, "qstar_m");
  if (phi.size() != alpha.size())
    throw std::invalid_argument("qstar_m: size mismatch");
  validate_phi(phi, "qstar_m");
  std::vector<double> a(alpha.size()), w(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    a[i] = alpha[i] / m;
    w[i] = std::exp(-phi[i] / m);
  }
  return solve_qstar_lambda0(a, w);
}

// --- Continuous limit density ----------------------------------------------

namespace {

constexpr std::uint64_t kDensitySeed = 0x5eed0bada55c0deULL;
constexpr int kImportanceSamples = 200000;

double log_beta2(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Visits importance-sampling pairs (q, weight) for E_Dirichlet[exp(-<phi,q>)].
template <typename Visitor>
double importance_scan(const std::vector<double>& alpha,
                       const std::vector<double>& phi, Visitor&& visit) {
  SplitMix64 rng(kDensitySeed);
  std::vector<double> q(alpha.size());
  double sum_w = 0.0, sum_w2 = 0.0;
  for (int i = 0; i < kImportanceSamples; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      q[k] = gamma_sample(alpha[k], rng);
      total += q[k];
    }
    double dot = 0.0;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      q[k] /= total;
      dot += phi[k] * q[k];
    }
    double w = std::exp(-dot);
    sum_w += w;
    sum_w2 += w * w;
    visit(q, w);
  }
  double ess = sum_w * sum_w / sum_w2;
  if (ess < 1000.0)
    throw ConvergenceError(
        "density importance sampling: effective sample size below 1000");
  return sum_w;
}

}  // namespace

DensityPrediction::DensityPrediction(std::vector<double> alpha,
                                     std::vector<double> phi)
    : alpha_(std::move(alpha)), phi_(std::move(phi)) {
  validate_alpha(alpha_, "DensityPrediction");
  if (phi_.size() != alpha_.size())
    throw std::invalid_argument("DensityPrediction: size mismatch");
  validate_phi(phi_, "DensityPrediction");
  if (alpha_.size() == 2) {
    auto f = [&](double s) {
      return std::exp(-phi_[0] * (1.0 - s) - phi_[1] * s);
    };
    double raw = beta_weighted_integral(f, alpha_[1], alpha_[0], 0.0, 1.0, 1e-10);
    tilt_z_ = raw / std::exp(log_beta2(alpha_[1], alpha_[0]));
  } else {
    double sum_w = importance_scan(alpha_, phi_,
                                   [](const std::vector<double>&, double) {});
    tilt_z_ = sum_w / kImportanceSamples;
  }
}

std::vector<double> DensityPrediction::bin_masses(int coordinate,
                                                  int bins) const {
  if (coordinate < 0 || coordinate >= static_cast<int>(alpha_.size()))
    throw std::invalid_argument("bin_masses: coordinate out of range");
  if (bins < 1) throw std::invalid_argument("bin_masses: need at least one bin");
  std::vector<double> masses(bins, 0.0);
  if (alpha_.size() == 2) {
    int other = 1 - coordinate;
    auto f = [&](double s) {
      return std::exp(-phi_[coordinate] * s - phi_[other] * (1.0 - s));
    };
    double total = 0.0;
    for (int j = 0; j < bins; ++j) {
      double lo = static_cast<double>(j) / bins;
      double hi = static_cast<double>(j + 1) / bins;
      masses[j] = beta_weighted_integral(f, alpha_[coordinate], alpha_[other],
                                         lo, hi, 1e-9);
      total += masses[j];
    }
    for (double& m : masses) m /= total;
  } else {
    double sum_w = importance_scan(
        alpha_, phi_, [&](const std::vector<double>& q, double w) {
          int j = std::min(bins - 1,
                           static_cast<int>(q[coordinate] * bins));
          masses[j] += w;
        });
    for (double& m : masses) m /= sum_w;
  }
  return masses;
}

double DensityPrediction::log_density(std::span<const double> q) const {
  if (alpha_.size() != 2)
    throw std::invalid_argument("log_density: only the two-type case is exact");
  if (q.size() != 2)
    throw std::invalid_argument("log_density: dimension mismatch");
  double s = q[1];
  if (!(s > 0.0 && s < 1.0))
    return -std::numeric_limits<double>::infinity();
  return (alpha_[1] - 1.0) * std::log(s) + (alpha_[0] - 1.0) * std::log1p(-s) -
         phi_[0] * (1.0 - s) - phi_[1] * s -
         log_beta2(alpha_[1], alpha_[0]) - std::log(tilt_z_);
}

double DensityPrediction::coordinate_mean(int coordinate) const {
  if (coordinate < 0 || coordinate >= static_cast<int>(alpha_.size()))
    throw std::invalid_argument("coordinate_mean: coordinate out of range");
  if (alpha_.size() == 2) {
    int other = 1 - coordinate;
    auto f = [&](double s) {
      return std::exp(-phi_[coordinate] * s - phi_[other] * (1.0 - s));
    };
    auto sf = [&](double s) { return s * f(s); };
    double den = beta_weighted_integral(f, alpha_[coordinate], alpha_[other],
                                        0.0, 1.0, 1e-10);
    double num = beta_weighted_integral(sf, alpha_[coordinate], alpha_[other],
                                        0.0, 1.0, 1e-10);
    return num / den;
  }
  double acc = 0.0;
  double sum_w = importance_scan(
      alpha_, phi_,
      [&](const std::vector<double>& q, double w) { acc += w * q[coordinate]; });
  return acc / sum_w;
}

// --- Two-locus, two-allele product analysis -------------------------------

namespace {

struct ProductProblem {
  ProductRegime regime;
  double alpha[2];
  double beta[2];
  double phi[2][2];  // phi[a][b]: allele a at locus 1, allele b at locus 2
  double w[2][2];    // exp(-phi), used by the flat regime

  double objective(double z1, double z2) const {
    double pa[2] = {z1, 1.0 - z1};
    double pb[2] = {z2, 1.0 - z2};
    double core;
    if (regime == ProductRegime::lambda0) {
      double big_w = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) big_w += w[a][b] * pa[a] * pb[b];
      core = -std::log(big_w);
    } else {
      double dot = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) dot += phi[a][b] * pa[a] * pb[b];
      core = dot;
    }
    return core - alpha[0] * std::log(z1) - alpha[1] * std::log(1.0 - z1) -
           beta[0] * std::log(z2) - beta[1] * std::log(1.0 - z2);
  }

  void gradient(double z1, double z2, double& g1, double& g2) const {
    double pa[2] = {z1, 1.0 - z1};
    double pb[2] = {z2, 1.0 - z2};
    double d1, d2;
    if (regime == ProductRegime::lambda0) {
      double th1[2], th2[2];
      for (int a = 0; a < 2; ++a) th1[a] = w[a][0] * pb[0] + w[a][1] * pb[1];
      for (int b = 0; b < 2; ++b) th2[b] = w[0][b] * pa[0] + w[1][b] * pa[1];
      double big_w = pa[0] * th1[0] + pa[1] * th1[1];
      d1 = -(th1[0] - th1[1]) / big_w;
      d2 = -(th2[0] - th2[1]) / big_w;
    } else {
      d1 = (phi[0][0] - phi[1][0]) * pb[0] + (phi[0][1] - phi[1][1]) * pb[1];
      d2 = (phi[0][0] - phi[0][1]) * pa[0] + (phi[1][0] - phi[1][1]) * pa[1];
    }
    g1 = d1 - alpha[0] / z1 + alpha[1] / (1.0 - z1);
    g2 = d2 - beta[0] / z2 + beta[1] / (1.0 - z2);
  }

  void hessian(double z1, double z2, double& h11, double& h12,
               double& h22) const {
    double pa[2] = {z1, 1.0 - z1};
    double pb[2] = {z2, 1.0 - z2};
    h11 = alpha[0] / (z1 * z1) + alpha[1] / ((1.0 - z1) * (1.0 - z1));
    h22 = beta[0] / (z2 * z2) + beta[1] / ((1.0 - z2) * (1.0 - z2));
    if (regime == ProductRegime::lambda0) {
      double th1[2], th2[2];
      for (int a = 0; a < 2; ++a) th1[a] = w[a][0] * pb[0] + w[a][1] * pb[1];
      for (int b = 0; b < 2; ++b) th2[b] = w[0][b] * pa[0] + w[1][b] * pa[1];
      double big_w = pa[0] * th1[0] + pa[1] * th1[1];
      double d1 = th1[0] - th1[1];
      double d2 = th2[0] - th2[1];
      double w_cross = w[0][0] - w[0][1] - w[1][0] + w[1][1];
      h11 += d1 * d1 / (big_w * big_w);
      h22 += d2 * d2 / (big_w * big_w);
      h12 = (d1 * d2 - w_cross * big_w) / (big_w * big_w);
    } else {
      h12 = phi[0][0] - phi[0][1] - phi[1][0] + phi[1][1];
    }
  }
};

constexpr double kInteriorMargin = 1e-9;

bool newton_minimize(const ProductProblem& prob, double& z1, double& z2) {
  for (int it = 0; it < 120; ++it) {
    double g1, g2;
    prob.gradient(z1, z2, g1, g2);
    if (std::max(std::abs(g1), std::abs(g2)) < 1e-12) return true;
    double h11, h12, h22;
    prob.hessian(z1, z2, h11, h12, h22);
    // Ridge-regularize toward positive definiteness so the step is descent.
    double mean = 0.5 * (h11 + h22);
    double rad = std::sqrt(0.25 * (h11 - h22) * (h11 - h22) + h12 * h12);
    double min_eig = mean - rad;
    double floor_eig = 1e-8 * std::max({std::abs(h11), std::abs(h22), 1.0});
    if (min_eig < floor_eig) {
      double ridge = floor_eig - min_eig;
      h11 += ridge;
      h22 += ridge;
    }
    double det = h11 * h22 - h12 * h12;
    double d1 = -(h22 * g1 - h12 * g2) / det;
    double d2 = -(h11 * g2 - h12 * g1) / det;
    double f0 = prob.objective(z1, z2);
    double step = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 30; ++halving, step *= 0.5) {
      double n1 = z1 + step * d1;
      double n2 = z2 + step * d2;
      if (n1 <= kInteriorMargin || n1 >= 1.0 - kInteriorMargin ||
          n2 <= kInteriorMargin || n2 >= 1.0 - kInteriorMargin)
        continue;
      if (prob.objective(n1, n2) <= f0) {
        z1 = n1;
        z2 = n2;
        moved = true;
        break;
      }
    }
    if (!moved) {
      double g1b, g2b;
      prob.gradient(z1, z2, g1b, g2b);
      return std::max(std::abs(g1b), std::abs(g2b)) < 1e-9;
    }
  }
  double g1, g2;
  prob.gradient(z1, z2, g1, g2);
  return std::max(std::abs(g1), std::abs(g2)) < 1e-9;
}

}  // namespace

HessianReport product_limit_k2l2(ProductRegime regime,
                                 std::span<const double> alpha,
                                 std::span<const double> beta,
                                 std::span<const double> phi) {
  if (alpha.size() != 2 || beta.size() != 2 || phi.size() != 4)
    throw std::invalid_argument(
        "product_limit_k2l2: expects two-entry priors and four costs");
  validate_alpha(alpha, "product_limit_k2l2");
  validate_alpha(beta, "product_limit_k2l2");
  validate_phi(phi, "product_limit_k2l2");

  ProductProblem prob;
  prob.regime = regime;
  prob.alpha[0] = alpha[0];
  prob.alpha[1] = alpha[1];
  prob.beta[0] = beta[0];
  prob.beta[1] = beta[1];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      prob.phi[a][b] = phi[a + 2 * b];  // genome order, locus 1 least significant
      prob.w[a][b] = std::exp(-prob.phi[a][b]);
    }

  HessianReport rep;
  rep.regime = regime;
  double lhs = std::pow(std::cbrt(alpha[0]) + std::cbrt(alpha[1]), 3.0) *
               std::pow(std::cbrt(beta[0]) + std::cbrt(beta[1]), 3.0);
  double rhs;
  if (regime == ProductRegime::lambda0) {
    double w_cross =
        prob.w[0][0] - prob.w[0][1] - prob.w[1][0] + prob.w[1][1];
    double w_min = std::min({prob.w[0][0], prob.w[0][1], prob.w[1][0],
                             prob.w[1][1]});
    rhs = (w_cross / w_min) * (w_cross / w_min);
  } else {
    double phi_cross =
        prob.phi[0][0] - prob.phi[0][1] - prob.phi[1][0] + prob.phi[1][1];
    rhs = phi_cross * phi_cross;
  }
  rep.certificate_lhs = lhs;
  rep.certificate_rhs = rhs;
  rep.convexity_certified = lhs > rhs;

  constexpr int kGrid = 21;
  constexpr double kMargin = 0.02;
  std::vector<ProductMinimum> found;
  for (int i = 0; i < kGrid; ++i) {
    for (int j = 0; j < kGrid; ++j) {
      double z1 = kMargin + (1.0 - 2.0 * kMargin) * i / (kGrid - 1);
      double z2 = kMargin + (1.0 - 2.0 * kMargin) * j / (kGrid - 1);
      if (!newton_minimize(prob, z1, z2)) {
        ++rep.rejected;
        continue;
      }
      if (std::min({z1, 1.0 - z1, z2, 1.0 - z2}) < 1e-7) {
        ++rep.rejected;
        continue;
      }
      ProductMinimum m;
      m.z1 = z1;
      m.z2 = z2;
      prob.hessian(z1, z2, m.h11, m.h12, m.h22);
      m.det = m.h11 * m.h22 - m.h12 * m.h12;
      if (!(m.h11 > 0.0) || !(m.det > 0.0)) {
        ++rep.rejected;  // stationary but not a local minimum
        continue;
      }
      m.objective = prob.objective(z1, z2);
      bool duplicate = false;
      for (const auto& other : found)
        if (std::abs(other.z1 - m.z1) < 1e-6 && std::abs(other.z2 - m.z2) < 1e-6) {
          duplicate = true;
          break;
        }
      if (!duplicate) found.push_back(m);
    }
  }
  std::sort(found.begin(), found.end(),
            [](const ProductMinimum& a, const ProductMinimum& b) {
              return a.z1 != b.z1 ? a.z1 < b.z1 : a.z2 < b.z2;
            });
  rep.minima = std::move(found);
  double total = 0.0;
  for (const auto& m : rep.minima) total += 1.0 / std::sqrt(m.det);
  for (const auto& m : rep.minima)
    rep.weights.push_back(1.0 / std::sqrt(m.det) / total);
  return rep;
}

// --- Unified prediction front-end ------------------------------------------

std::string to_string(LimitRegime regime) {
  switch (regime) {
    case LimitRegime::lambda0: return "lambda0";
    case LimitRegime::lambda_mid: return "lambda_mid";
    case LimitRegime::lambda1: return "lambda1";
    case LimitRegime::lambda_gt1: return "lambda_gt1";
  }
  return "unknown";
}

std::string to_string(ProductRegime regime) {
  return regime == ProductRegime::lambda0 ? "lambda0" : "lambda_mid";
}

double LimitPrediction::frequency_point(int locus, int allele) const {
  if (components.size() != 1)
    throw std::logic_error(
        "frequency_point: prediction is not a single point mass");
  return components.at(0).locus_marginals.at(locus).at(allele);
}

namespace {

void validate_limit_config(const LimitConfig& cfg) {
  if (cfg.num_alleles < 2)
    throw std::invalid_argument("predict_limit: need at least two alleles");
  if (cfg.num_loci < 1)
    throw std::invalid_argument("predict_limit: need at least one locus");
  if (static_cast<int>(cfg.alpha.size()) != cfg.num_loci)
    throw std::invalid_argument("predict_limit: one prior row per locus required");
  for (const auto& row : cfg.alpha) {
    if (static_cast<int>(row.size()) != cfg.num_alleles)
      throw std::invalid_argument("predict_limit: prior row size mismatch");
    validate_alpha(row, "predict_limit");
  }
  AlleleSpace space(cfg.num_alleles, cfg.num_loci);
  if (cfg.phi.size() != space.num_genomes())
    throw std::invalid_argument("predict_limit: one cost per genome required");
  validate_phi(cfg.phi, "predict_limit");
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
    throw std::invalid_argument("predict_limit: bad scaling exponent");
}

LimitPrediction product_prediction(const LimitConfig& cfg) {
  ProductRegime regime =
      cfg.lambda == 0.0 ? ProductRegime::lambda0 : ProductRegime::lambda_mid;
  HessianReport rep =
      product_limit_k2l2(regime, cfg.alpha[0], cfg.alpha[1], cfg.phi);
  if (rep.minima.empty())
    throw ConvergenceError("predict_limit: no interior minimum found");
  LimitPrediction pred;
  pred.regime = cfg.lambda == 0.0 ? LimitRegime::lambda0 : LimitRegime::lambda_mid;
  for (std::size_t i = 0; i < rep.minima.size(); ++i) {
    const auto& m = rep.minima[i];
    MixtureComponent comp;
    comp.weight = rep.weights[i];
    if (regime == ProductRegime::lambda0) {
      // Observable frequencies are the selection-tilted product law.
      std::vector<double> q(4), w(4);
      double pa[2] = {m.z1, 1.0 - m.z1};
      double pb[2] = {m.z2, 1.0 - m.z2};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          q[a + 2 * b] = pa[a] * pb[b];
          w[a + 2 * b] = std::exp(-cfg.phi[a + 2 * b]);
        }
      std::vector<double> r = r_map(q, w);
      comp.locus_marginals = {{r[0] + r[2], r[1] + r[3]},
                              {r[0] + r[1], r[2] + r[3]}};
    } else {
      comp.locus_marginals = {{m.z1, 1.0 - m.z1}, {m.z2, 1.0 - m.z2}};
    }
    pred.components.push_back(std::move(comp));
  }
  pred.product_report = std::move(rep);
  return pred;
}

}  // namespace

LimitPrediction predict_limit(const LimitConfig& cfg) {
  validate_limit_config(cfg);
  const bool scaled = cfg.prior_scaling == PriorScaling::scaled;
  LimitPrediction pred;

  if (cfg.lambda == 1.0 || (!scaled && cfg.lambda > 1.0)) {
    if (cfg.num_loci != 1)
      throw std::invalid_argument(
          "predict_limit: continuous-regime prediction supports one locus");
    if (cfg.lambda == 1.0) {
      pred.regime = LimitRegime::lambda1;
      pred.density.emplace(cfg.alpha[0], cfg.phi);
    } else {
      pred.regime = LimitRegime::lambda_gt1;
      pred.density.emplace(cfg.alpha[0],
                           std::vector<double>(cfg.phi.size(), 0.0));
    }
    return pred;
  }
  if (scaled && cfg.lambda > 1.0)
    throw std::invalid_argument(
        "predict_limit: scaled priors are defined for exponents in [0, 1]");

  // From here on: lambda in [0, 1).
  if (!scaled) {
    // The stationary law piles onto the unique lowest-cost genome.
    if (cfg.num_loci != 1)
      throw std::invalid_argument(
          "predict_limit: fixed-prior point prediction supports one locus");
    auto it = std::min_element(cfg.phi.begin(), cfg.phi.end());
    for (auto jt = cfg.phi.begin(); jt != cfg.phi.end(); ++jt)
      if (jt != it && *jt == *it)
        throw std::invalid_argument(
            "predict_limit: lowest-cost genome is not unique");
    int argmin = static_cast<int>(it - cfg.phi.begin());
    MixtureComponent comp;
    comp.locus_marginals = {std::vector<double>(cfg.num_alleles, 0.0)};
    comp.locus_marginals[0][argmin] = 1.0;
    pred.components.push_back(std::move(comp));
    if (cfg.lambda == 0.0) {
      pred.regime = LimitRegime::lambda0;
      pred.theta = std::exp(-*it);
    } else {
      pred.regime = LimitRegime::lambda_mid;
      pred.theta = *it;
    }
    return pred;
  }

  if (cfg.num_loci == 1) {
    if (cfg.lambda == 0.0) {
      std::vector<double> w(cfg.phi.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(-cfg.phi[i]);
      Lambda0Solution sol = solve_qstar_lambda0(cfg.alpha[0], w);
      pred.regime = LimitRegime::lambda0;
      pred.theta = sol.theta;
      MixtureComponent comp;
      comp.locus_marginals = {sol.r_star};
      pred.components.push_back(std::move(comp));
    } else {
      LambdaMidSolution sol = solve_qstar_lambda_mid(cfg.alpha[0], cfg.phi);
      pred.regime = LimitRegime::lambda_mid;
      pred.theta = sol.theta;
      MixtureComponent comp;
      comp.locus_marginals = {sol.q_star};
      pred.components.push_back(std::move(comp));
    }
    return pred;
  }
  if (cfg.num_loci == 2 && cfg.num_alleles == 2) return product_prediction(cfg);
  throw std::invalid_argument(
      "predict_limit: multi-locus prediction supports only the two-locus, "
      "two-allele product analysis");
}

}  // namespace evomc
