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
#include <span>
#include <string>
#include <vector>

#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace swlab {

// Vertex of the big world: a signed word +/-(z_1,...,z_n) with z_j in Z^d
// and z_j != 0 for all j < n (the last component may be 0). Stored
// flattened: word.size() == n*d.
struct BigWorldAddress {
  bool negative = false;
  std::vector<std::int32_t> word;

  int components(int d) const { return static_cast<int>(word.size()) / d; }
  bool operator==(const BigWorldAddress& o) const = default;
};

BigWorldAddress bigworld_origin(int d);
// Lift of a torus point: the one-component word +(x).
BigWorldAddress lift(const SitePoint& x);

// The three-case rule: append 0 if z_n != 0; drop z_n if z_n = 0, n > 1;
// flip the sign of (0) if z_n = 0, n = 1. An involution.
BigWorldAddress long_range_neighbour(const BigWorldAddress& a, int d);

// Adds each y in N(0) to the last word component; sign preserved.
std::vector<BigWorldAddress> short_range_neighbours_bw(const BigWorldAddress& a,
                                                       const TorusSpec& spec);

// Ball of radius r around a centre, with intra-ball adjacency. Vertices are
// interned by structural equality of (sign, word); index 0 is the centre.
// Adjacency stores, per vertex, the long-range neighbour and one slot per
// neighbourhood offset (kOutside when the neighbour falls outside the ball).
class BigWorldBall {
 public:
  static constexpr std::int32_t kOutside = -1;

  int d = 1;
  int m = 1;
  int radius = 0;

  std::size_t size() const { return distances_.size(); }
  int distance(std::size_t v) const { return distances_[v]; }
  std::int32_t long_edge(std::size_t v) const { return long_edge_[v]; }
  std::span<const std::int32_t> short_edges(std::size_t v) const {
    return {short_edges_.data() + v * n_offsets_, static_cast<std::size_t>(n_offsets_)};
  }
  int offset_count() const { return n_offsets_; }
  const std::vector<SitePoint>& offsets() const { return offsets_; }
  BigWorldAddress address(std::size_t v) const;
  // Index of an address inside the ball, or kOutside.
  std::int32_t find(const BigWorldAddress& a) const;

 private:
  friend BigWorldBall enumerate_ball(const TorusSpec&, const BigWorldAddress&, int,
                                     std::int64_t);
  std::vector<std::int32_t> key_data_;   // concatenated [sign, word...] keys
  std::vector<std::uint64_t> key_off_;   // per-vertex offset into key_data_
  std::vector<std::uint32_t> key_len_;
  std::vector<std::int32_t> distances_;
  std::vector<std::int32_t> long_edge_;
  std::vector<std::int32_t> short_edges_;
  std::vector<std::uint32_t> slots_;     // open-addressing intern table
  int n_offsets_ = 0;
  std::vector<SitePoint> offsets_;
};

// The cap applies to discovered vertices (exact), not to the loose a-priori
// bound 3*M^radius, which overestimates real ball sizes by orders of
// magnitude already at moderate radius.
BigWorldBall enumerate_ball(const TorusSpec& spec, const BigWorldAddress& centre,
                            int radius, std::int64_t vertex_cap = kDefaultBallCap);

// Exact n-step occupation probabilities of 0 for the big-world walk started
// at `start`. A length-n path from start to 0 stays within distance
// (n + |start|)/2 of 0, so the DP over the ball of that radius is exact.
struct ReturnProbabilityTable {
  int d = 1;
  int m = 1;
  double beta = 0.0;
  int n0 = 0;
  BigWorldAddress start;
  std::vector<double> p;  // p[n], 0 <= n <= n0

  std::string to_csv() const;
};

ReturnProbabilityTable return_probabilities(const TorusSpec& spec, const WalkKernel& kernel,
                                            int n0,
                                            const BigWorldAddress& start,
                                            std::int64_t vertex_cap = kDefaultBallCap);
ReturnProbabilityTable return_probabilities(const TorusSpec& spec, const WalkKernel& kernel,
                                            int n0,
                                            std::int64_t vertex_cap = kDefaultBallCap);

// Compensated partial sum of p[n] (even n only if even_only): a lower bound
// for the corresponding Green value.
double partial_green(const ReturnProbabilityTable& t, bool even_only);

// Geometric tail extrapolation (p[n0] + p[n0-1]) * rho2/(1-rho2) with
// rho2 = p[n0]/p[n0-2]: both parity subsequences decay by rho2 per two
// steps. A point estimate, never a bound.
struct TailEstimate {
  double rho2 = 0.0;
  double tail = 0.0;
};
TailEstimate geometric_tail(const ReturnProbabilityTable& t);

// The realization map onto a sampled small world: phi(+(z)) = z mod 2L,
// phi(-(z)) = LR(0) + z, and each further component z_j applies
// LR then adds z_j.
SitePoint realize_phi(const SmallWorldGraph& g, const BigWorldAddress& a);

}  // namespace swlab
