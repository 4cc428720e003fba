// Copyright 2026 The swlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "swlab/errors.hpp"
#include "swlab/green.hpp"
#include "swlab/rng.hpp"
#include "swlab/stats.hpp"

using namespace swlab;

namespace {

GreenReport toy_green(double g) {
  GreenReport r;
  r.g_bigworld = g;
  r.g_bigworld_even = g / 2.0;
  return r;
}

std::vector<double> exponential_sample(std::uint64_t seed, std::size_t n, double mean) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.exponential(1.0 / mean);
  return v;
}

}  // namespace

TEST_CASE("empirical distribution basics") {
  EmpiricalDistribution emp({3.0, 1.0, 2.0}, 1);
  CHECK(emp.size() == 3);
  CHECK(emp.censored() == 1);
  CHECK(emp.censored_fraction() == doctest::Approx(0.25).epsilon(1e-15));
  REQUIRE(emp.values().size() == 3);
  CHECK(emp.values()[0] == 1.0);  // sorted on construction
  CHECK(emp.values()[2] == 3.0);
  // Censored observations sit beyond every finite time.
  CHECK(emp.survival(0.0) == 1.0);
  CHECK(emp.survival(1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(emp.survival(2.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(emp.survival(3.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(emp.survival(100.0) == doctest::Approx(0.25).epsilon(1e-15));
  // Mean and variance ignore the censored count.
  CHECK(emp.mean() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(emp.variance() == doctest::Approx(1.0).epsilon(1e-15));

  EmpiricalDistribution empty;
  CHECK(empty.survival(1.0) == 0.0);
  CHECK(std::isnan(empty.mean()));
  CHECK(empty.censored_fraction() == 0.0);
  CHECK(std::isnan(EmpiricalDistribution({5.0}).variance()));

  CHECK_THROWS_AS(EmpiricalDistribution({-1.0}), InvalidArgument);
  CHECK_THROWS_AS(EmpiricalDistribution({std::numeric_limits<double>::quiet_NaN()}),
                  InvalidArgument);
  CHECK_THROWS_AS(EmpiricalDistribution({std::numeric_limits<double>::infinity()}),
                  InvalidArgument);
}

TEST_CASE("limit law survival") {
  const LimitLaw exp2 = LimitLaw::exponential(2.0);
  CHECK(exp2.atom == 0.0);
  CHECK(exp2.survival(0.0) == 1.0);
  CHECK(exp2.survival(2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(exp2.survival(-1.0) == 1.0);

  const LimitLaw mixed = LimitLaw::with_atom(0.3, 1.5);
  CHECK(mixed.survival(0.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(mixed.survival(3.0) == doctest::Approx(0.7 * std::exp(-2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(LimitLaw::exponential(0.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::exponential(-2.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::with_atom(1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::with_atom(-0.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(LimitLaw::with_atom(0.5, 0.0), InvalidArgument);
}

TEST_CASE("limit laws from green constants") {
  const GreenReport g = toy_green(2.0074730670615436);

  const LimitLaw distant = meeting_law_distant(g);
  CHECK(distant.atom == 0.0);
  CHECK(distant.theta == doctest::Approx(g.g_bigworld_even).epsilon(1e-15));

  // Coinciding starts: the escape weight is 1/G of the full visit count.
  const LimitLaw origin = meeting_law_at_origin(g);
  CHECK(origin.atom == doctest::Approx(1.0 - 1.0 / g.g_bigworld).epsilon(1e-14));
  CHECK(origin.theta == doctest::Approx(g.g_bigworld_even).epsilon(1e-15));

  const LimitLaw fixed = meeting_law_fixed(g, 0.3);
  CHECK(fixed.atom == doctest::Approx(0.3 / g.g_bigworld_even).epsilon(1e-14));
  CHECK(fixed.theta == doctest::Approx(g.g_bigworld_even).epsilon(1e-15));
  CHECK(meeting_law_fixed(g, 0.0).atom == 0.0);

  // One-moving-walker versions run at half speed: scale G instead of G/2.
  const LimitLaw hit = hitting_law_distant(g);
  CHECK(hit.atom == 0.0);
  CHECK(hit.theta == doctest::Approx(g.g_bigworld).epsilon(1e-15));
  const LimitLaw hit0 = hitting_law_at_origin(g);
  CHECK(hit0.atom == doctest::Approx(origin.atom).epsilon(1e-15));
  CHECK(hit0.theta == doctest::Approx(g.g_bigworld).epsilon(1e-15));

  CHECK_THROWS_AS(meeting_law_distant(toy_green(0.5)), InvalidArgument);
  CHECK_THROWS_AS(meeting_law_fixed(g, -0.1), InvalidArgument);
  CHECK_THROWS_AS(meeting_law_fixed(g, g.g_bigworld_even * 1.01), InvalidArgument);
}

TEST_CASE("ks distance is exact for step functions") {
  // Two observations against S(1)=1/2, S(2)=1/4: the jump at t=1 dominates.
  const double theta = 1.0 / std::log(2.0);
  EmpiricalDistribution emp({1.0, 2.0});
  CHECK(ks_distance(emp, LimitLaw::exponential(theta)) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Zeros carry the atom (no discrepancy at 0+); the supremum is then the
  // left limit at the jump t=1, where the law has decayed but the empirical
  // survival still holds 1/2.
  EmpiricalDistribution with_zeros({0.0, 0.0, 1.0, 1.0});
  const LimitLaw half_atom = LimitLaw::with_atom(0.5, 1.0);
  const double left_gap = 0.5 - half_atom.survival(1.0);
  CHECK(ks_distance(with_zeros, half_atom) == doctest::Approx(left_gap).epsilon(1e-12));

  // The censored mass never decays, so it floors the distance.
  EmpiricalDistribution censored({1.0}, 1);
  CHECK(ks_distance(censored, LimitLaw::exponential(1.0)) >= 0.5);

  CHECK_THROWS_AS(ks_distance(EmpiricalDistribution{}, LimitLaw::exponential(1.0)),
                  InvalidArgument);
}

TEST_CASE("ks distance at exact quantiles") {
  // Samples placed at the (i+1/2)/N quantiles straddle the law by 1/(2N).
  const double theta = 1.7;
  std::vector<double> v;
  for (int i = 0; i < 100; ++i)
    v.push_back(-theta * std::log(1.0 - (i + 0.5) / 100.0));
  CHECK(ks_distance(EmpiricalDistribution(std::move(v)), LimitLaw::exponential(theta)) ==
        doctest::Approx(0.005).epsilon(1e-12));
}

TEST_CASE("ks distance on a large synthetic sample") {
  EmpiricalDistribution emp(exponential_sample(41, 100000, 2.0));
  CHECK(ks_distance(emp, LimitLaw::exponential(2.0)) <= dkw_epsilon(100000, 0.01));
}

TEST_CASE("dkw band calibration") {
  // The DKW bound at delta=0.05 should be violated rarely; allow twice the
  // nominal rate to keep the check stable.
  const double eps = dkw_epsilon(1000, 0.05);
  const LimitLaw law = LimitLaw::exponential(1.0);
  int exceed = 0;
  for (int rep = 0; rep < 200; ++rep) {
    EmpiricalDistribution emp(
        exponential_sample(derive_seed(777, static_cast<std::uint64_t>(rep), 3), 1000, 1.0));
    if (ks_distance(emp, law) > eps) ++exceed;
  }
  CHECK(exceed <= 20);
}

TEST_CASE("dkw and two-sample thresholds") {
  CHECK(dkw_epsilon(10000, 0.05) == doctest::Approx(0.013581015157).epsilon(1e-9));
  CHECK(ks_two_sample_threshold(100, 200, 0.01) ==
        doctest::Approx(0.199342369428).epsilon(1e-9));
  CHECK_THROWS_AS(dkw_epsilon(0, 0.05), InvalidArgument);
  CHECK_THROWS_AS(dkw_epsilon(10, 0.0), InvalidArgument);
  CHECK_THROWS_AS(dkw_epsilon(10, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ks_two_sample_threshold(0, 5, 0.1), InvalidArgument);
  CHECK_THROWS_AS(ks_two_sample_threshold(5, 5, 1.5), InvalidArgument);
}

TEST_CASE("two sample ks") {
  EmpiricalDistribution a({1.0, 2.0, 3.0});
  CHECK(ks_two_sample(a, a) == 0.0);

  EmpiricalDistribution lo({1.0, 2.0});
  EmpiricalDistribution hi({5.0, 6.0});
  CHECK(ks_two_sample(lo, hi) == doctest::Approx(1.0).epsilon(1e-15));

  // Same law, independent draws: below the 1% rejection threshold.
  EmpiricalDistribution x(exponential_sample(7, 2000, 1.0));
  EmpiricalDistribution y(exponential_sample(8, 2000, 1.0));
  CHECK(ks_two_sample(x, y) <= ks_two_sample_threshold(2000, 2000, 0.01));

  // Mismatched censoring shows up as a tail gap.
  EmpiricalDistribution half_censored({1.0, 2.0}, 2);
  EmpiricalDistribution none({1.0, 2.0});
  CHECK(ks_two_sample(half_censored, none) >= 0.5);

  CHECK_THROWS_AS(ks_two_sample(EmpiricalDistribution{}, a), InvalidArgument);
}

TEST_CASE("empirical laplace transform") {
  EmpiricalDistribution emp({0.0, std::log(2.0)});
  CHECK(empirical_laplace(emp, 1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));

  // Censored observations contribute zero mass.
  EmpiricalDistribution cens({0.0, std::log(2.0)}, 2);
  CHECK(empirical_laplace(cens, 1.0, 1.0) == doctest::Approx(0.375).epsilon(1e-14));
  CHECK(empirical_laplace(cens, 1e-12, 1.0) ==
        doctest::Approx(1.0 - cens.censored_fraction()).epsilon(1e-9));

  // The scale divides the observations.
  EmpiricalDistribution raw({2.0, 4.0});
  EmpiricalDistribution scaled({1.0, 2.0});
  CHECK(empirical_laplace(raw, 1.0, 2.0) ==
        doctest::Approx(empirical_laplace(scaled, 1.0, 1.0)).epsilon(1e-14));

  // Laplace transforms of positive variables are decreasing and convex.
  EmpiricalDistribution sample(exponential_sample(99, 5000, 1.5));
  const std::vector<double> grid{0.5, 1.0, 1.5, 2.0};
  const std::vector<double> curve = empirical_laplace_curve(sample, grid, 1.0);
  REQUIRE(curve.size() == 4);
  CHECK(curve[0] == doctest::Approx(empirical_laplace(sample, 0.5, 1.0)).epsilon(1e-15));
  CHECK(curve[1] < curve[0]);
  CHECK(curve[2] < curve[1]);
  CHECK(curve[3] < curve[2]);
  CHECK(curve[0] + curve[2] >= 2.0 * curve[1]);
  CHECK(curve[1] + curve[3] >= 2.0 * curve[2]);

  // Exponential with mean 2: E exp(-lambda T) = 1/(1 + 2 lambda).
  EmpiricalDistribution big(exponential_sample(1234, 200000, 2.0));
  for (double lam : {0.5, 1.0, 2.0})
    CHECK(empirical_laplace(big, lam, 1.0) ==
          doctest::Approx(1.0 / (1.0 + 2.0 * lam)).epsilon(0.01));

  CHECK_THROWS_AS(empirical_laplace(emp, 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(empirical_laplace(emp, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(empirical_laplace(EmpiricalDistribution{}, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("laplace transform limits") {
  const GreenReport g = toy_green(2.0);
  CHECK(laplace_limit_distant(g, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(laplace_limit_at_origin(g, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(laplace_limit_fixed(g, 0.0, 2.0) ==
        doctest::Approx(laplace_limit_distant(g, 2.0)).epsilon(1e-15));
  // A start carrying the full even mass meets immediately.
  CHECK(laplace_limit_fixed(g, g.g_bigworld_even, 0.7) == doctest::Approx(1.0).epsilon(1e-14));

  // Each limit equals the transform of the corresponding limit law.
  const GreenReport gb = toy_green(2.0074730670615436);
  for (double lam : {0.25, 1.0, 3.0}) {
    const LimitLaw origin = meeting_law_at_origin(gb);
    const double via_law =
        origin.atom + (1.0 - origin.atom) / (1.0 + lam * origin.theta);
    CHECK(laplace_limit_at_origin(gb, lam) == doctest::Approx(via_law).epsilon(1e-12));

    const LimitLaw fixed = meeting_law_fixed(gb, 0.4);
    const double via_fixed =
        fixed.atom + (1.0 - fixed.atom) / (1.0 + lam * fixed.theta);
    CHECK(laplace_limit_fixed(gb, 0.4, lam) == doctest::Approx(via_fixed).epsilon(1e-12));
  }

  CHECK_THROWS_AS(laplace_limit_distant(g, 0.0), InvalidArgument);
  CHECK_THROWS_AS(laplace_limit_fixed(g, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(laplace_limit_fixed(g, 2.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(laplace_limit_distant(toy_green(0.2), 1.0), InvalidArgument);
}

TEST_CASE("total variation distance") {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<double> q{0.25, 0.75};
  const std::vector<double> point_a{1.0, 0.0};
  const std::vector<double> point_b{0.0, 1.0};
  CHECK(total_variation(p, p) == 0.0);
  CHECK(total_variation(point_a, point_b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(total_variation(p, q) == doctest::Approx(0.25).epsilon(1e-15));

  const std::vector<double> shorter{1.0};
  CHECK_THROWS_AS(total_variation(p, shorter), InvalidArgument);
  const std::vector<double> negative{-0.5, 1.5};
  CHECK_THROWS_AS(total_variation(p, negative), InvalidArgument);
}

TEST_CASE("torus meeting references") {
  const TorusReference d1 = torus_meeting_reference(1);
  CHECK(d1.scale == "L^2");
  REQUIRE(d1.constant.has_value());
  CHECK(*d1.constant == doctest::Approx(1.0 / 12.0).epsilon(1e-15));

  const TorusReference d2 = torus_meeting_reference(2);
  CHECK(d2.scale == "L^2 log L");
  REQUIRE(d2.constant.has_value());
  CHECK(*d2.constant == doctest::Approx(1.0 / 3.14159265358979324).epsilon(1e-12));

  // In d=3 the constant is half the lattice visit count of the simple walk.
  const TorusReference d3 = torus_meeting_reference(3);
  CHECK(d3.scale == "L^3");
  REQUIRE(d3.constant.has_value());
  CHECK(*d3.constant == doctest::Approx(green_lattice(3, 1.0) / 2.0).epsilon(1e-9));

  const TorusReference d4 = torus_meeting_reference(4);
  CHECK(d4.scale == "L^4");
  CHECK_FALSE(d4.constant.has_value());
  CHECK(d4.constant_name.find("4") != std::string::npos);

  CHECK_THROWS_AS(torus_meeting_reference(0), InvalidArgument);
}
