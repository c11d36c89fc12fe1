#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evomc/rng.hpp"

namespace evomc {

// Raised when a requested computation would exceed a hard size budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterative routine fails to reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

// log(sum_i exp(x[i])), stable against overflow. Empty input -> -inf.
double log_sum_exp(std::span<const double> x);

// 0.5 * sum_i |p[i] - q[i]|; sizes must match.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Adaptive Simpson quadrature of f on [a, b] to relative tolerance rel_tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol);

// Integral of s^(a-1) (1-s)^(b-1) f(s) ds over [lo, hi] subset of (0, 1),
// with endpoint singularities (a < 1 or b < 1) removed by the power
// substitutions u = s^a near 0 and v = (1-s)^b near 1.
double beta_weighted_integral(const std::function<double(double)>& f, double a,
                              double b, double lo, double hi, double rel_tol);

// Gamma(shape, 1) variate; Marsaglia-Tsang for shape >= 1, boosting for
// shape < 1. shape must be positive and finite.
double gamma_sample(double shape, SplitMix64& rng);

}  // namespace evomc
