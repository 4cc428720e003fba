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

#include "swlab/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>

#include "swlab/bigworld.hpp"
#include "swlab/errors.hpp"
#include "swlab/rng.hpp"

namespace swlab {

std::int64_t TorusSpec::site_count() const {
  std::int64_t n = 1;
  for (int i = 0; i < d; ++i) n *= side();
  return n;
}

int TorusSpec::short_degree() const {
  if (m == 1) return 2 * d;
  int n = 1;
  for (int i = 0; i < d; ++i) n *= 2 * m + 1;
  return n - 1;
}

void TorusSpec::validate() const {
  if (d < 1 || d > 8) throw InvalidArgument("torus dimension must be in [1, 8]");
  if (L < 2) throw InvalidArgument("torus half-side L must be at least 2");
  if (m < 1) throw InvalidArgument("neighbourhood radius m must be positive");
  if (m >= L) throw InvalidArgument("neighbourhood radius m must be < L so offsets are distinct mod 2L");
  double sites = 1.0;
  for (int i = 0; i < d; ++i) sites *= static_cast<double>(side());
  if (sites > static_cast<double>(std::int64_t{1} << 31))
    throw TooLarge("site count exceeds the 2^31 index budget");
}

void SmallWorldGraph::validate() const {
  spec.validate();
  const auto n = static_cast<std::size_t>(spec.site_count());
  if (matching.size() != n) throw InvalidArgument("matching size does not equal site count");
  for (std::size_t x = 0; x < n; ++x) {
    const SiteIndex y = matching[x];
    if (y >= n) throw InvalidArgument("matching entry out of range");
    if (y == x) throw InvalidArgument("matching has a fixed point at site " + std::to_string(x));
    if (matching[y] != x) throw InvalidArgument("matching is not an involution at site " + std::to_string(x));
  }
}

SiteIndex index_of(const TorusSpec& spec, const SitePoint& p) {
  if (static_cast<int>(p.c.size()) != spec.d) throw InvalidArgument("point dimension mismatch");
  const std::int64_t side = spec.side();
  std::int64_t idx = 0;
  std::int64_t stride = 1;
  for (int i = 0; i < spec.d; ++i) {
    const std::int64_t c = p.c[i];
    if (c < -spec.L || c >= spec.L) throw InvalidArgument("coordinate outside canonical window");
    idx += (c + spec.L) * stride;
    stride *= side;
  }
  return static_cast<SiteIndex>(idx);
}

SitePoint point_of(const TorusSpec& spec, SiteIndex i) {
  const std::int64_t side = spec.side();
  SitePoint p;
  p.c.resize(spec.d);
  std::int64_t v = i;
  for (int k = 0; k < spec.d; ++k) {
    p.c[k] = static_cast<std::int32_t>(v % side - spec.L);
    v /= side;
  }
  return p;
}

SitePoint canonical(const TorusSpec& spec, const std::vector<std::int64_t>& coords) {
  if (static_cast<int>(coords.size()) != spec.d) throw InvalidArgument("point dimension mismatch");
  const std::int64_t side = spec.side();
  SitePoint p;
  p.c.resize(spec.d);
  for (int i = 0; i < spec.d; ++i) {
    const std::int64_t v = (((coords[i] + spec.L) % side) + side) % side;
    p.c[i] = static_cast<std::int32_t>(v - spec.L);
  }
  return p;
}

std::vector<SitePoint> neighbourhood_offsets(const TorusSpec& spec) {
  std::vector<SitePoint> out;
  if (spec.m == 1) {
    out.reserve(2 * spec.d);
    for (int i = 0; i < spec.d; ++i) {
      SitePoint plus, minus;
      plus.c.assign(spec.d, 0);
      minus.c.assign(spec.d, 0);
      plus.c[i] = 1;
      minus.c[i] = -1;
      out.push_back(plus);
      out.push_back(minus);
    }
    return out;
  }
  // l-infinity box, lexicographic order, origin excluded.
  SitePoint z;
  z.c.assign(spec.d, static_cast<std::int32_t>(-spec.m));
  while (true) {
    bool origin = std::all_of(z.c.begin(), z.c.end(), [](std::int32_t v) { return v == 0; });
    if (!origin) out.push_back(z);
    int axis = spec.d - 1;
    while (axis >= 0) {
      if (++z.c[axis] <= spec.m) break;
      z.c[axis] = static_cast<std::int32_t>(-spec.m);
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

std::vector<SitePoint> short_range_neighbours(const TorusSpec& spec, const SitePoint& x) {
  std::vector<SitePoint> out;
  std::vector<std::int64_t> coords(spec.d);
  for (const SitePoint& z : neighbourhood_offsets(spec)) {
    for (int i = 0; i < spec.d; ++i) coords[i] = static_cast<std::int64_t>(x.c[i]) + z.c[i];
    out.push_back(canonical(spec, coords));
  }
  return out;
}

std::vector<SiteIndex> short_range_neighbours(const TorusSpec& spec, SiteIndex x) {
  std::vector<SiteIndex> out;
  const SitePoint p = point_of(spec, x);
  for (const SitePoint& q : short_range_neighbours(spec, p)) out.push_back(index_of(spec, q));
  return out;
}

SmallWorldGraph sample_small_world(const TorusSpec& spec, std::uint64_t seed,
                                   bool forbid_short_pairs) {
  spec.validate();
  const std::int64_t n = spec.site_count();
  Rng rng(seed);
  std::vector<SiteIndex> order(static_cast<std::size_t>(n));
  SmallWorldGraph g;
  g.spec = spec;
  g.matching.assign(static_cast<std::size_t>(n), 0);

  // Circular short-range adjacency test for the rejection variant.
  auto adjacent = [&](SiteIndex a, SiteIndex b) {
    const SitePoint pa = point_of(spec, a);
    const SitePoint pb = point_of(spec, b);
    const std::int64_t side = spec.side();
    std::int64_t l1 = 0, linf = 0;
    for (int i = 0; i < spec.d; ++i) {
      std::int64_t delta = std::llabs(static_cast<std::int64_t>(pa.c[i]) - pb.c[i]);
      delta = std::min(delta, side - delta);
      l1 += delta;
      linf = std::max(linf, delta);
    }
    return spec.m == 1 ? l1 == 1 : (linf <= spec.m && linf > 0);
  };

  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::int64_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = static_cast<SiteIndex>(i);
    for (std::int64_t i = n - 1; i > 0; --i) {
      const std::uint64_t j = rng.below(static_cast<std::uint64_t>(i + 1));
      std::swap(order[static_cast<std::size_t>(i)], order[j]);
    }
    bool ok = true;
    for (std::int64_t k = 0; k + 1 < n; k += 2) {
      const SiteIndex a = order[static_cast<std::size_t>(k)];
      const SiteIndex b = order[static_cast<std::size_t>(k + 1)];
      if (forbid_short_pairs && adjacent(a, b)) {
        ok = false;
        break;
      }
      g.matching[a] = b;
      g.matching[b] = a;
    }
    if (ok) return g;
  }
  throw ConvergenceFailure("rejection sampling of a matching with no short-range pair did not terminate");
}

std::int64_t torus_distance(const TorusSpec& spec, const SitePoint& x, const SitePoint& y) {
  const std::int64_t side = spec.side();
  std::int64_t l1 = 0, linf = 0;
  for (int i = 0; i < spec.d; ++i) {
    std::int64_t delta = std::llabs(static_cast<std::int64_t>(x.c[i]) - y.c[i]);
    delta = std::min(delta, side - delta);
    l1 += delta;
    linf = std::max(linf, delta);
  }
  if (spec.m == 1) return l1;
  return (linf + spec.m - 1) / spec.m;
}

std::int64_t graph_distance(const SmallWorldGraph& g, SiteIndex x, SiteIndex y) {
  if (x == y) return 0;
  const std::int64_t n = g.spec.site_count();
  std::vector<std::int32_t> dist(static_cast<std::size_t>(n), -1);
  std::deque<SiteIndex> frontier;
  dist[x] = 0;
  frontier.push_back(x);
  while (!frontier.empty()) {
    const SiteIndex v = frontier.front();
    frontier.pop_front();
    const std::int32_t dv = dist[v];
    auto visit = [&](SiteIndex u) {
      if (dist[u] < 0) {
        dist[u] = dv + 1;
        frontier.push_back(u);
      }
    };
    for (SiteIndex u : short_range_neighbours(g.spec, v)) visit(u);
    visit(g.matching[v]);
    if (dist[y] >= 0) return dist[y];
  }
  return dist[y];
}

std::int64_t graph_distance(const SmallWorldGraph& g, const SitePoint& x, const SitePoint& y) {
  return graph_distance(g, index_of(g.spec, x), index_of(g.spec, y));
}

bool is_locally_big_world(const SmallWorldGraph& g, const SitePoint& x, int t,
                          std::int64_t vertex_cap) {
  if (t < 0) throw InvalidArgument("ball radius must be nonnegative");
  if (t == 0) return true;
  const BigWorldBall ball = enumerate_ball(g.spec, lift(x), t, vertex_cap);
  std::vector<SiteIndex> images;
  images.reserve(ball.size());
  for (std::size_t v = 0; v < ball.size(); ++v)
    images.push_back(index_of(g.spec, realize_phi(g, ball.address(v))));
  std::sort(images.begin(), images.end());
  return std::adjacent_find(images.begin(), images.end()) == images.end();
}

nlohmann::json graph_to_json(const SmallWorldGraph& g) {
  return nlohmann::json{
      {"d", g.spec.d}, {"L", g.spec.L}, {"m", g.spec.m}, {"matching", g.matching}};
}

SmallWorldGraph graph_from_json(const nlohmann::json& j) {
  SmallWorldGraph g;
  try {
    g.spec.d = j.at("d").get<int>();
    g.spec.L = j.at("L").get<std::int64_t>();
    g.spec.m = j.at("m").get<int>();
    g.matching = j.at("matching").get<std::vector<SiteIndex>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed graph JSON: ") + e.what());
  }
  g.validate();
  return g;
}

}  // namespace swlab
