#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evomc/genotype.hpp"

using namespace evomc;

TEST_CASE("allele space encodes base-k digits, locus 0 least significant") {
  AlleleSpace space(3, 2);
  CHECK(space.num_genomes() == 9);
  for (std::uint32_t g = 0; g < 9; ++g) {
    std::vector<int> alleles = space.decode(g);
    CHECK(alleles.size() == 2);
    CHECK(space.encode(alleles) == g);
    CHECK(space.allele_at(g, 0) == static_cast<int>(g % 3));
    CHECK(space.allele_at(g, 1) == static_cast<int>(g / 3));
  }
  CHECK_THROWS_AS(AlleleSpace(1, 2), std::invalid_argument);
  CHECK_THROWS_AS(AlleleSpace(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(AlleleSpace(2, 40), std::invalid_argument);  // 2^40 genomes
}

TEST_CASE("simplex points renormalize tiny drift and reject garbage") {
  SimplexPoint p({0.25, 0.75 + 3e-10});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(SimplexPoint({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(SimplexPoint({1.5, -0.5}), std::invalid_argument);
  SimplexPoint clamped({1.0 + 5e-13, -5e-13});
  CHECK(clamped[1] == 0.0);
}

TEST_CASE("selection weights follow the strength schedule") {
  std::vector<double> phi{0.0, std::log(6.0)};
  std::vector<double> w = scaled_weights(phi, 16.0, 0.5);
  CHECK(w[0] == 1.0);
  CHECK(w[1] == doctest::Approx(std::exp(-std::log(6.0) / 4.0)).epsilon(1e-15));
  std::vector<double> flat = scaled_weights(phi, 1000.0, 0.0);
  CHECK(flat[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  std::vector<double> near_one = scaled_weights(phi, 100.0, 1.0);
  CHECK(near_one[1] == doctest::Approx(std::exp(-std::log(6.0) / 100.0)));
  CHECK_THROWS_AS((void)scaled_weights(phi, 0.0, 0.5), std::invalid_argument);
  std::vector<double> bad_phi{-1.0, 0.0};
  CHECK_THROWS_AS((void)scaled_weights(bad_phi, 10.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("reweighting map tilts by the weights") {
  std::vector<double> q{0.6, 0.4};
  std::vector<double> w{1.0, 1.0 / 6.0};
  std::vector<double> r = r_map(q, w);
  CHECK(r[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(r[1] == doctest::Approx(0.1).epsilon(1e-14));
  // Equal weights fix every point; scaling the weights changes nothing.
  std::vector<double> ones{2.0, 2.0};
  std::vector<double> fixed = r_map(q, ones);
  CHECK(fixed[0] == doctest::Approx(0.6).epsilon(1e-15));
  std::vector<double> w2{2.0, 2.0 / 6.0};
  std::vector<double> scaled = r_map(q, w2);
  CHECK(scaled[0] == doctest::Approx(r[0]).epsilon(1e-15));
  std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS((void)r_map(q, bad), std::invalid_argument);
}

TEST_CASE("weak-selection tilt contracts to the identity as n grows") {
  // max_q |r(q; w_n) - q| over a fine grid must shrink strictly with n when
  // the weights approach one under the schedule.
  std::vector<double> phi{0.0, std::log(6.0)};
  double prev = 1e9;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    std::vector<double> w = scaled_weights(phi, n, 0.5);
    double worst = 0.0;
    for (int i = 1; i < 100; ++i) {
      double q1 = i / 100.0;
      std::vector<double> q{q1, 1.0 - q1};
      std::vector<double> r = r_map(q, w);
      worst = std::max(worst, std::abs(r[0] - q1));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("population keeps locus counts in sync under replacement") {
  AlleleSpace space(2, 2);
  Population pop(space, {0, 1, 2, 3, 3});
  auto l0 = pop.locus_counts(0);
  CHECK(l0[0] == 2);  // genomes 0 and 2 carry allele 0 at locus 0
  CHECK(l0[1] == 3);
  auto l1 = pop.locus_counts(1);
  CHECK(l1[0] == 2);
  CHECK(l1[1] == 3);

  pop.replace(4, 0);
  Population fresh(space, {0, 1, 2, 3, 0});
  for (int l = 0; l < 2; ++l)
    for (int a = 0; a < 2; ++a)
      CHECK(pop.locus_counts(l)[a] == fresh.locus_counts(l)[a]);

  // Replacing with the same genome is a no-op.
  pop.replace(2, 2);
  CHECK(pop.genome(2) == 2);
  CHECK(pop.locus_counts(0)[0] == fresh.locus_counts(0)[0]);
}
