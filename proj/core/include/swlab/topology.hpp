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
#include <vector>

namespace swlab {

using SiteIndex = std::uint32_t;

// A torus point with coordinates reduced to the canonical window [-L, L).
struct SitePoint {
  std::vector<std::int32_t> c;

  bool operator==(const SitePoint& o) const { return c == o.c; }
  bool operator<(const SitePoint& o) const { return c < o.c; }
};

// (Z mod 2L)^d with neighbourhood radius m. m=1 gives the 2d nearest
// neighbours (l1 distance 1); m>=1 with the box variant gives all sites at
// l-infinity distance <= m.
struct TorusSpec {
  int d = 1;
  std::int64_t L = 2;
  int m = 1;

  std::int64_t side() const { return 2 * L; }
  std::int64_t site_count() const;
  // Number of short-range neighbours of a site: 2d for m=1, (2m+1)^d - 1
  // otherwise.
  int short_degree() const;
  // Total degree including the single long-range edge.
  int degree() const { return short_degree() + 1; }

  void validate() const;
  bool operator==(const TorusSpec& o) const = default;
};

// Torus plus a fixed-point-free involution assigning each site its
// long-range neighbour. Sites are indexed mixed-radix little-endian over
// coordinates shifted to [0, 2L): index = sum_i (c_i + L) * (2L)^i.
struct SmallWorldGraph {
  TorusSpec spec;
  std::vector<SiteIndex> matching;

  SiteIndex long_range(SiteIndex x) const { return matching[x]; }
  void validate() const;
};

SiteIndex index_of(const TorusSpec& spec, const SitePoint& p);
SitePoint point_of(const TorusSpec& spec, SiteIndex i);
// Reduce arbitrary integer coordinates into the canonical window.
SitePoint canonical(const TorusSpec& spec, const std::vector<std::int64_t>& coords);

// Offsets z with 0 < ||z|| <= m in the walk's neighbourhood geometry
// (l1 for m=1, l-infinity box otherwise). Deterministic order.
std::vector<SitePoint> neighbourhood_offsets(const TorusSpec& spec);

std::vector<SitePoint> short_range_neighbours(const TorusSpec& spec, const SitePoint& x);
std::vector<SiteIndex> short_range_neighbours(const TorusSpec& spec, SiteIndex x);

// Uniform fixed-point-free pairing: seeded Fisher-Yates shuffle of the site
// list, consecutive entries paired. `forbid_short_pairs` switches to the
// rejection-sampled space where no pair is a short-range connection.
SmallWorldGraph sample_small_world(const TorusSpec& spec, std::uint64_t seed,
                                   bool forbid_short_pairs = false);

// Deterministic-part graph distance d(x,y) on the torus alone.
std::int64_t torus_distance(const TorusSpec& spec, const SitePoint& x, const SitePoint& y);

// BFS over short-range + long-range edges. d_S(x,y) <= d(x,y) always.
std::int64_t graph_distance(const SmallWorldGraph& g, SiteIndex x, SiteIndex y);
std::int64_t graph_distance(const SmallWorldGraph& g, const SitePoint& x, const SitePoint& y);

inline constexpr std::int64_t kDefaultBallCap = 5'000'000;

// True iff the realization map restricted to the big-world ball of radius t
// around the lift of x is injective (no image collisions on the torus).
bool is_locally_big_world(const SmallWorldGraph& g, const SitePoint& x, int t,
                          std::int64_t vertex_cap = kDefaultBallCap);

nlohmann::json graph_to_json(const SmallWorldGraph& g);
SmallWorldGraph graph_from_json(const nlohmann::json& j);

}  // namespace swlab
