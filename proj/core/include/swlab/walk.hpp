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

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "swlab/rng.hpp"
#include "swlab/topology.hpp"

namespace swlab {

// One step of the walk moves along the long-range connection with
// probability beta and otherwise by an offset drawn from delta.
struct WalkKernel {
  double beta = 0.0;
  std::vector<SitePoint> offsets;  // support of delta; may include 0
  std::vector<double> weights;     // same length, sums to 1

  void validate(const TorusSpec& spec) const;

  // Uniform law on the short-range neighbourhood.
  static WalkKernel simple(const TorusSpec& spec, double beta);
  // Full-kernel lazification P' = (I + P)/2, re-expressed as a WalkKernel:
  // beta' = beta/2 and delta' = (delta*(1-beta) + delta_0) / (2 - beta).
  static WalkKernel lazified(const WalkKernel& k);
};

// Minimum per-edge transition mass: min over beta (long edge) and
// (1-beta)*q(z) for offsets z != 0. This is the p_min that makes the
// Cheeger bound valid with multigraph edge counting: every crossing edge
// carries at least this much mass, so Q(V,Vc) >= p_min * e(V,Vc). The
// minimum merged matrix entry would over-count parallel long+short pairs.
double min_edge_probability(const WalkKernel& k);

enum class TimeModel { discrete, continuous };

struct MeetingSample {
  double value = 0.0;     // raw time
  double rescaled = 0.0;  // value / (2L)^d
  SiteIndex x0 = 0;
  SiteIndex y0 = 0;
  bool censored = false;
};

// Sampling-ready form of (graph, kernel): cumulative offset table plus
// per-axis strides for O(d) moves.
class KernelSampler {
 public:
  KernelSampler(const TorusSpec& spec, const WalkKernel& kernel);

  const TorusSpec& spec() const { return spec_; }
  double beta() const { return beta_; }
  int offset_count() const { return static_cast<int>(flat_offsets_.size()) / std::max(1, spec_.d); }

  // Draws a short-range offset index from delta.
  int draw_offset(Rng& rng) const;
  const std::int32_t* offset(int k) const { return flat_offsets_.data() + static_cast<std::size_t>(k) * spec_.d; }
  bool is_long_step(Rng& rng) const { return beta_ > 0.0 && rng.uniform01() < beta_; }

 private:
  TorusSpec spec_;
  double beta_;
  std::vector<std::int32_t> flat_offsets_;
  std::vector<double> cumulative_;
  bool uniform_;
};

// A walker holding both coordinates and the mixed-radix index, so offset
// moves cost O(d) and long-range jumps are one table lookup.
class Walker {
 public:
  Walker(const TorusSpec& spec, SiteIndex start);

  SiteIndex pos() const { return idx_; }
  void move_offset(const TorusSpec& spec, const std::int32_t* dz);
  void move_long(const SmallWorldGraph& g);
  // One embedded-jump-chain step.
  void step(const SmallWorldGraph& g, const KernelSampler& ks, Rng& rng);

 private:
  void set_index(const TorusSpec& spec, SiteIndex i);

  std::array<std::int32_t, 8> digits_;  // coordinates shifted to [0, 2L)
  SiteIndex idx_;
  std::array<std::int64_t, 8> strides_;
};

// Transition row of P_S at x: mass (1-beta) q(z) on x+z plus beta on
// matching[x]; coinciding targets add (multigraph semantics). Sorted by
// target index.
std::vector<std::pair<SiteIndex, double>> step_distribution(const SmallWorldGraph& g,
                                                            const WalkKernel& kernel,
                                                            SiteIndex x);

// First strictly-positive meeting time of two independent walkers,
// evaluated at jump epochs. Continuous mode: independent rate-1 clocks per
// walker. Starting together, the clock starts after the first jump of the
// pair. Horizon overruns are recorded as censored, never thrown.
MeetingSample sample_meeting_time(const SmallWorldGraph& g, const KernelSampler& ks,
                                  TimeModel tm, SiteIndex x, SiteIndex y, Rng& rng,
                                  double horizon);

// First strictly-positive time a single walker occupies `target`
// (the return time when x == target).
MeetingSample sample_hitting_time(const SmallWorldGraph& g, const KernelSampler& ks,
                                  TimeModel tm, SiteIndex x, SiteIndex target, Rng& rng,
                                  double horizon);

struct StationaryCheckResult {
  bool ok = false;
  double max_row_error = 0.0;
  double max_column_error = 0.0;
  double max_asymmetry = 0.0;
};

// Verifies P_S is doubly stochastic and symmetric on sampled rows within
// 1e-12. Column sums are exact: only neighbours of y can step to y.
StationaryCheckResult stationary_check(const SmallWorldGraph& g, const WalkKernel& kernel,
                                       int sample_rows = 64, std::uint64_t seed = 0);

}  // namespace swlab
