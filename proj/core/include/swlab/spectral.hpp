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
#include <string>
#include <vector>

#include "swlab/rng.hpp"
#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace swlab {

// Undirected multigraph with explicit edge multiplicities. Loops are kept
// (they contribute to degree but never to a cut).
struct Multigraph {
  int n = 0;
  // Flattened edge list (u, v, multiplicity), u <= v.
  struct Edge {
    int u, v, mult;
  };
  std::vector<Edge> edges;
};

Multigraph to_multigraph(const SmallWorldGraph& g);

// (n,r)-configuration: r half-edges per vertex, uniform pairing; the
// (n,r,h) variant appends one extra vertex carrying h half-edges.
Multigraph configuration_multigraph(int n, int r, Rng& rng);
Multigraph configuration_multigraph(int n, int r, int h, Rng& rng);

// Exact edge isoperimetric constant min_{0<|V|<=n/2} e(V,Vc)/|V| as a
// reduced fraction, by Gray-code subset enumeration with incremental cut
// updates (subsets containing vertex 0 suffice: V and Vc give the same cut).
struct IsoResult {
  std::int64_t cut_num = 0;
  std::int64_t size_den = 1;
  double value = 0.0;
};
IsoResult isoperimetric_exact(const Multigraph& g, int max_n = 24);

// (1/2) * iota^2 * p_min^2.
double cheeger_lower_bound(double iota, double p_min);

struct SpectralResult {
  double lambda1 = 0.0;    // second-largest eigenvalue of P_S
  double lambda_abs = 0.0; // max(|lambda_1|, |lambda_{n-1}|)
  double gap = 0.0;        // 1 - lambda_abs
  std::string method;      // "dense" or "power"
};

// Dense symmetric solve up to dense_limit sites, deflated power iteration
// beyond (tolerance 1e-5). lambda1 and lambda_abs are reported separately:
// non-lazy walks on even tori are periodic with lambda_abs = 1 while the
// Cheeger check concerns lambda1.
SpectralResult spectral_gap(const SmallWorldGraph& g, const WalkKernel& kernel,
                            int dense_limit = 1 << 14);

struct MixingProfile {
  std::vector<double> t;
  std::vector<double> deviation;  // max_{x,y} |P^x(X_t = y) - 1/n|
  std::vector<double> mc_error;   // empty on the exact path
  double gamma_fit = 0.0;         // fitted decay rate on the tail
  double r2 = 0.0;
  std::string method;             // "eigen" or "monte_carlo"
};

// Continuous-time deviation curve via symmetric eigendecomposition of
// exp(t(P-I)) for n <= exact_limit, Monte Carlo occupancy histograms with
// DKW error bars beyond. The fit regresses log deviation on the last 60%
// of grid points.
MixingProfile mixing_profile(const SmallWorldGraph& g, const WalkKernel& kernel,
                             const std::vector<double>& t_grid, int exact_limit = 1 << 12,
                             int mc_replicas = 20000, std::uint64_t mc_seed = 1);

struct SpectralReport {
  int sites = 0;
  double beta = 0.0;
  bool lazy = false;
  double iota = 0.0;
  std::int64_t iota_num = 0, iota_den = 1;
  bool iota_exact = false;
  double p_min = 0.0;
  double cheeger_lower = 0.0;
  double lambda1 = 0.0;
  double lambda_abs = 0.0;
  double gamma_fit = 0.0;
  double r2 = 0.0;
  std::string method;
};

nlohmann::json report_to_json(const SpectralReport& r);

// Full per-instance report: exact iota when the graph is small enough
// (otherwise iota fields are zero and iota_exact=false), spectral gap,
// Cheeger bound with the per-edge p_min convention, mixing fit over an
// automatic grid scaled by the exact gap.
SpectralReport spectral_report(const SmallWorldGraph& g, const WalkKernel& kernel,
                               int iso_max_n = 24);

struct IsoSurveyRow {
  std::uint64_t seed = 0;
  double iota = 0.0;        // exact, or NaN in proxy mode
  double lambda1 = 0.0;
  double cheeger_lower = 0.0;
};

struct IsoSurvey {
  double alpha = 0.0;
  bool proxy = false;  // graphs too large for exact iota: rows carry
                       // lambda1 only and fraction_above is over 1-lambda1
  double fraction_above = 0.0;
  std::vector<IsoSurveyRow> rows;

  std::string to_csv() const;
};

// Fraction of sampled small worlds with iota > alpha (exact enumeration
// when sites <= 24; otherwise labelled proxy mode reporting 1-lambda1).
IsoSurvey iso_survey(const TorusSpec& spec, const WalkKernel& kernel, int samples,
                     double alpha, std::uint64_t master_seed);

// Same survey over (n,r,h)-configuration multigraphs (iota only; there is
// no walk kernel attached).
IsoSurvey iso_survey_configuration(int n, int r, int h, int samples, double alpha,
                                   std::uint64_t master_seed);

}  // namespace swlab
