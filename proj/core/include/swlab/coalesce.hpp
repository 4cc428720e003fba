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
#include <string>
#include <vector>

#include "swlab/rng.hpp"
#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace swlab {

// Kingman coalescent marginal: probability that n lineages have merged down
// to exactly k by time t (pure-death chain, rate C(j,2) from j).
// Alternating sum evaluated with log-gamma magnitudes and compensated
// summation; n > 25 accumulates in long double, n > 40 refuses.
double kingman_pmf(int n, int k, double t);
std::vector<double> kingman_row(int n, double t);  // k = 1..n

struct CoalescenceEvent {
  double time = 0.0;
  int count_after = 0;
};

struct CoalescingTrajectory {
  int n0 = 0;
  double horizon = 0.0;
  bool censored = false;  // horizon hit before full coalescence
  std::vector<CoalescenceEvent> events;

  int count_at(double t) const;
  double final_time() const { return events.empty() ? 0.0 : events.back().time; }
};

// Placement, rescaling and validity data for an n-particle run.
struct ExperimentPlan {
  int n = 2;
  double h_min = 0.0;    // required minimum pairwise separation
  double s_scale = 0.0;  // s_L = (2L)^d * G^ev_B(0)
  std::vector<double> t_grid;
};

// h_L = ceil((log log L)^2), natural logs.
double separation_floor(std::int64_t L);

// Plan with h_min = separation_floor and s_scale from the supplied
// G^ev_B(0) estimate. Validates M^{4 h} / (2L)^d against `ip_threshold`:
// the hypothesis behind the Kingman limit is asymptotic and the ratio is
// large at any reachable L, so the default threshold only rejects absurd
// geometries.
ExperimentPlan make_plan(const TorusSpec& spec, int n, double g_even,
                         std::vector<double> t_grid, double ip_threshold = 1e4);

// n sites equally spaced along axis 0 (maximal pairwise separation for a
// cycle); throws if the spacing violates plan separation.
std::vector<SiteIndex> distant_sites(const TorusSpec& spec, int n, double h_min);

// Event-driven coalescing walk: independent rate-1 clocks, mover drawn
// uniformly among survivors, merge on landing at an occupied site.
// Discrete mode moves all particles synchronously and merges co-occupants
// after the step.
CoalescingTrajectory sample_coalescing(const SmallWorldGraph& g, const KernelSampler& ks,
                                       const std::vector<SiteIndex>& starts, Rng& rng,
                                       double horizon, TimeModel tm = TimeModel::continuous);

}  // namespace swlab
