#include "evomc/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evomc {

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw std::invalid_argument("tv_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double m, double fm,
                       double whole, double tol, int depth) {
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = simpson(a, fa, m, fm, flm);
  double right = simpson(m, fm, b, fb, frm);
  double delta = left + right - whole;
  if (depth >= 50)
    throw ConvergenceError("adaptive_simpson: max recursion depth reached");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                         depth + 1) +
         simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                         depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: a > b");
  if (a == b) return 0.0;
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = simpson(a, fa, b, fb, fm);
  double scale = std::max({std::abs(whole), std::abs(fa) * (b - a),
                           std::abs(fb) * (b - a), 1e-300});
  return simpson_recurse(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, 0);
}

double beta_weighted_integral(const std::function<double(double)>& f, double a,
                              double b, double lo, double hi, double rel_tol) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("beta_weighted_integral: exponents must be positive");
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
    throw std::invalid_argument("beta_weighted_integral: bad interval");
  if (lo == hi) return 0.0;
  double total = 0.0;
  double split = std::clamp(0.5, lo, hi);
  auto direct = [&](double s) {
    return std::pow(s, a - 1.0) * std::pow(1.0 - s, b - 1.0) * f(s);
  };
  if (lo < split) {
    if (a < 1.0) {
      // u = s^a removes the s^(a-1) singularity: ds s^(a-1) = du / a.
      // Only used for a < 1; for a >= 1 the substitution would itself put an
      // unbounded derivative at u = 0.
      auto g = [&](double u) {
        double s = std::pow(u, 1.0 / a);
        return std::pow(1.0 - s, b - 1.0) * f(s) / a;
      };
      total +=
          adaptive_simpson(g, std::pow(lo, a), std::pow(split, a), rel_tol);
    } else {
      total += adaptive_simpson(direct, lo, split, rel_tol);
    }
  }
  if (split < hi) {
    if (b < 1.0) {
      // v = (1-s)^b removes the (1-s)^(b-1) singularity.
      auto g = [&](double v) {
        double s = 1.0 - std::pow(v, 1.0 / b);
        return std::pow(s, a - 1.0) * f(s) / b;
      };
      total +=
          adaptive_simpson(g, std::pow(1.0 - hi, b), std::pow(1.0 - split, b),
                           rel_tol);
    } else {
      total += adaptive_simpson(direct, split, hi, rel_tol);
    }
  }
  return total;
}

double gamma_sample(double shape, SplitMix64& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("gamma_sample: shape must be positive finite");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a+1) * U^(1/a).
    double u = rng.uniform_double();
    while (u <= 0.0) u = rng.uniform_double();
    return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    // Standard normal via Box-Muller.
    double u1 = rng.uniform_double();
    double u2 = rng.uniform_double();
    while (u1 <= 0.0) u1 = rng.uniform_double();
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = rng.uniform_double();
    if (u < 1.0 - 0.0331 * z * z * z * z) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

}  // namespace evomc
