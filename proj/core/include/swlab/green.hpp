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

#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "swlab/topology.hpp"

namespace swlab {

// Phi_{Z_2}(t) = (1 + sqrt(1+4t^2)) / 2.
double phi_z2(double t);

struct QuadratureOptions {
  double split = 0.75;   // axis split point separating the singular cube
  int outer_nodes = 96;  // Gauss-Legendre nodes on [split, pi]
  int inner_nodes = 32;  // nodes on [0, split] for mixed boxes
  int pyramid_nodes = 48;
  double rel_tol = 1e-7;
  int max_doublings = 3;
};

// Lattice Green generating function Ghat_{Z^d}(z) = (2pi)^-d Int (1 - z
// phi(theta))^-1 dtheta, phi(theta) = mean cos(theta_i), for the simple
// walk, d >= 3. The integrand is singular at theta=0 when z=1; the central
// cube is handled by a permutation-symmetric pyramid substitution
// (theta = a*t*(1, xi_1, ..., xi_{d-1}) on the region where theta_1 is
// maximal) that makes the radial factor t^{d-1}/(1-z phi) smooth, with
// node-doubling refinement until the relative change is below tolerance.
double green_lattice(int d, double z, const QuadratureOptions& opts = {});

// The implicit function with Ghat(z) = Phi(z*Ghat(z)): closed form
// sqrt(1+s^2) for d=1, a monotone-interpolated parametric table
// (s = z*Ghat(z), Phi = Ghat(z)) for d >= 3.
class PhiFunction {
 public:
  static PhiFunction closed_form_z1();

  double operator()(double s) const;  // throws DomainExceeded past s_max
  double s_max() const { return s_max_; }
  bool closed_form() const { return table_s_.empty(); }
  int dimension() const { return d_; }
  const std::vector<double>& table_s() const { return table_s_; }
  const std::vector<double>& table_phi() const { return table_phi_; }

 private:
  friend PhiFunction build_phi_lattice(int, const QuadratureOptions&);
  int d_ = 1;
  double s_max_ = 0.0;  // infinite domain encoded as +inf
  std::vector<double> table_s_, table_phi_, slopes_;  // monotone cubic Hermite
};

// d=1 returns the closed form; d=2 is excluded (recurrent, divergent at
// z=1); d >= 3 builds the parametric table over a z-grid refined
// geometrically toward z=1, where s(z) has a square-root approach to s_max.
PhiFunction build_phi_lattice(int d, const QuadratureOptions& opts = {});

struct GreenSolveOptions {
  int dp_horizon = 40;
  std::int64_t ball_cap = kDefaultBallCap;
  double bisection_tol = 1e-12;
  QuadratureOptions quadrature;
};

struct GreenReport {
  int d = 1;
  double beta = 0.0;
  std::optional<double> g_torus_limit;  // G_{Z^d}(0), finite only for d >= 3
  double g_bigworld = 0.0;              // G_B(0)
  double g_bigworld_even = 0.0;         // exactly G_B(0)/2
  double dp_partial = 0.0;              // DP lower bound at dp_horizon
  double dp_extrapolated = 0.0;         // geometric-tail point estimate
  int dp_horizon = 0;
  double fixed_point_residual = 0.0;
  bool lower_bound_check = false;  // G_B(0) >= 1/(1-beta^2)
  std::string method;
};

nlohmann::json report_to_json(const GreenReport& r);

// Root of t = (1+sqrt(1+4 beta^2 t^2))/2 + Phi_{Z^d}((1-beta)t) - 1 by
// bisection, bracketing from below at max(1, 1/(1-beta^2)). Every iterate
// is domain-checked against phi.s_max(); no analytic continuation.
double bigworld_green_fixed_point(double beta, const PhiFunction& phi,
                                  double hint_hi, double tol = 1e-12);

// Fixed point cross-validated against the big-world DP: the report carries
// the DP partial sum (must be exceeded), the tail-extrapolated estimate and
// the 1/(1-beta^2) lower-bound check. Requires m=1 (the Phi calculus is for
// the simple walk).
GreenReport solve_bigworld_green(int d, double beta, const GreenSolveOptions& opts = {},
                                 const PhiFunction* phi = nullptr);

struct BetaScanRow {
  double beta = 0.0;
  double g_lattice = 0.0;
  double g_bigworld = 0.0;
  double diff = 0.0;  // g_lattice - g_bigworld
};

struct BetaScanResult {
  int d = 3;
  std::vector<BetaScanRow> rows;
  // Bracketing interval for the sign change, refined by bisection.
  std::optional<std::pair<double, double>> crossing;

  std::string to_csv() const;
};

// Evaluates G_{Z^d}(0) - G_B(0) across the grid (d >= 3); asserts the sign
// is + at the smallest beta and - at the largest, then refines the crossing.
BetaScanResult beta_comparison_scan(int d, const std::vector<double>& beta_grid,
                                    const QuadratureOptions& opts = {});

}  // namespace swlab
