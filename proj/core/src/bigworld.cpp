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

#include "swlab/bigworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>

#include "swlab/errors.hpp"

namespace swlab {

namespace {

// FNV-1a over the int32 words of a key.
std::uint64_t hash_key(const std::int32_t* data, std::uint32_t len) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint32_t i = 0; i < len; ++i) {
    std::uint32_t w = static_cast<std::uint32_t>(data[i]);
    for (int b = 0; b < 4; ++b) {
      h ^= (w >> (8 * b)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

void check_address(const BigWorldAddress& a, int d) {
  if (a.word.empty() || a.word.size() % static_cast<std::size_t>(d) != 0)
    throw InvalidArgument("big-world address word length must be a positive multiple of d");
  const int n = a.components(d);
  for (int j = 0; j + 1 < n; ++j) {
    bool zero = true;
    for (int i = 0; i < d; ++i) zero = zero && a.word[static_cast<std::size_t>(j) * d + i] == 0;
    if (zero) throw InvalidArgument("big-world address has a zero non-final component");
  }
}

// Word-metric norm: per-component step counts plus one long-range hop per
// component boundary, plus one for the leading sign flip.
std::int64_t address_norm(const BigWorldAddress& a, const TorusSpec& spec) {
  const int d = spec.d;
  const int n = a.components(d);
  std::int64_t total = n - 1 + (a.negative ? 1 : 0);
  for (int j = 0; j < n; ++j) {
    std::int64_t l1 = 0, linf = 0;
    for (int i = 0; i < d; ++i) {
      const std::int64_t v = std::llabs(static_cast<std::int64_t>(a.word[static_cast<std::size_t>(j) * d + i]));
      l1 += v;
      linf = std::max(linf, v);
    }
    total += spec.m == 1 ? l1 : (linf + spec.m - 1) / spec.m;
  }
  return total;
}

// Grows-on-demand open addressing over the key arena.
class Interner {
 public:
  Interner(std::vector<std::int32_t>& key_data, std::vector<std::uint64_t>& key_off,
           std::vector<std::uint32_t>& key_len, std::vector<std::uint32_t>& slots)
      : key_data_(key_data), key_off_(key_off), key_len_(key_len), slots_(slots) {
    slots_.assign(1024, 0);
  }

  std::int32_t lookup(const std::int32_t* key, std::uint32_t len) const {
    const std::uint64_t mask = slots_.size() - 1;
    std::uint64_t i = hash_key(key, len) & mask;
    while (slots_[i] != 0) {
      const std::uint32_t v = slots_[i] - 1;
      if (key_len_[v] == len &&
          std::memcmp(key_data_.data() + key_off_[v], key, len * sizeof(std::int32_t)) == 0)
        return static_cast<std::int32_t>(v);
      i = (i + 1) & mask;
    }
    return -1;
  }

  // Returns (index, inserted).
  std::pair<std::int32_t, bool> intern(const std::int32_t* key, std::uint32_t len) {
    const std::int32_t found = lookup(key, len);
    if (found >= 0) return {found, false};
    const std::uint32_t v = static_cast<std::uint32_t>(key_len_.size());
    key_off_.push_back(key_data_.size());
    key_len_.push_back(len);
    key_data_.insert(key_data_.end(), key, key + len);
    if ((v + 1) * 10 >= slots_.size() * 7)
      rehash(slots_.size() * 2);  // re-places every key including v
    else
      place(v);
    return {static_cast<std::int32_t>(v), true};
  }

 private:
  void place(std::uint32_t v) {
    const std::uint64_t mask = slots_.size() - 1;
    std::uint64_t i = hash_key(key_data_.data() + key_off_[v], key_len_[v]) & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = v + 1;
  }

  void rehash(std::size_t cap) {
    slots_.assign(cap, 0);
    for (std::uint32_t v = 0; v < key_len_.size(); ++v) place(v);
  }

  std::vector<std::int32_t>& key_data_;
  std::vector<std::uint64_t>& key_off_;
  std::vector<std::uint32_t>& key_len_;
  std::vector<std::uint32_t>& slots_;
};

// Writes the long-range neighbour of `key` into `out`; keys are
// [sign, z_1..., z_n...] with sign in {0,1}.
void long_key(const std::int32_t* key, std::uint32_t len, int d, std::vector<std::int32_t>& out) {
  out.assign(key, key + len);
  const std::uint32_t ncomp = (len - 1) / static_cast<std::uint32_t>(d);
  bool last_zero = true;
  for (int i = 0; i < d; ++i) last_zero = last_zero && key[len - static_cast<std::uint32_t>(d) + i] == 0;
  if (!last_zero) {
    out.insert(out.end(), static_cast<std::size_t>(d), 0);
  } else if (ncomp > 1) {
    out.resize(len - static_cast<std::uint32_t>(d));
  } else {
    out[0] ^= 1;
  }
}

}  // namespace

BigWorldAddress bigworld_origin(int d) {
  BigWorldAddress a;
  a.word.assign(static_cast<std::size_t>(d), 0);
  return a;
}

BigWorldAddress lift(const SitePoint& x) {
  BigWorldAddress a;
  a.word = x.c;
  return a;
}

BigWorldAddress long_range_neighbour(const BigWorldAddress& a, int d) {
  check_address(a, d);
  const int n = a.components(d);
  bool last_zero = true;
  for (int i = 0; i < d; ++i) last_zero = last_zero && a.word[static_cast<std::size_t>(n - 1) * d + i] == 0;
  BigWorldAddress out = a;
  if (!last_zero) {
    out.word.insert(out.word.end(), static_cast<std::size_t>(d), 0);
  } else if (n > 1) {
    out.word.resize(static_cast<std::size_t>(n - 1) * d);
  } else {
    out.negative = !out.negative;
  }
  return out;
}

std::vector<BigWorldAddress> short_range_neighbours_bw(const BigWorldAddress& a,
                                                       const TorusSpec& spec) {
  check_address(a, spec.d);
  const std::size_t base = a.word.size() - static_cast<std::size_t>(spec.d);
  std::vector<BigWorldAddress> out;
  for (const SitePoint& z : neighbourhood_offsets(spec)) {
    BigWorldAddress b = a;
    for (int i = 0; i < spec.d; ++i) b.word[base + i] += z.c[i];
    out.push_back(std::move(b));
  }
  return out;
}

BigWorldAddress BigWorldBall::address(std::size_t v) const {
  BigWorldAddress a;
  const std::int32_t* key = key_data_.data() + key_off_[v];
  a.negative = key[0] != 0;
  a.word.assign(key + 1, key + key_len_[v]);
  return a;
}

std::int32_t BigWorldBall::find(const BigWorldAddress& a) const {
  std::vector<std::int32_t> key;
  key.reserve(1 + a.word.size());
  key.push_back(a.negative ? 1 : 0);
  key.insert(key.end(), a.word.begin(), a.word.end());
  const std::uint64_t mask = slots_.size() - 1;
  const auto len = static_cast<std::uint32_t>(key.size());
  std::uint64_t i = hash_key(key.data(), len) & mask;
  while (slots_[i] != 0) {
    const std::uint32_t v = slots_[i] - 1;
    if (key_len_[v] == len &&
        std::memcmp(key_data_.data() + key_off_[v], key.data(), len * sizeof(std::int32_t)) == 0)
      return static_cast<std::int32_t>(v);
    i = (i + 1) & mask;
  }
  return kOutside;
}

BigWorldBall enumerate_ball(const TorusSpec& spec, const BigWorldAddress& centre, int radius,
                            std::int64_t vertex_cap) {
  if (spec.d < 1 || spec.d > 8) throw InvalidArgument("dimension must be in [1, 8]");
  if (spec.m < 1) throw InvalidArgument("neighbourhood radius m must be positive");
  if (radius < 0) throw InvalidArgument("ball radius must be nonnegative");
  if (vertex_cap < 1) throw InvalidArgument("vertex cap must be positive");
  check_address(centre, spec.d);

  BigWorldBall ball;
  ball.d = spec.d;
  ball.m = spec.m;
  ball.radius = radius;
  ball.offsets_ = neighbourhood_offsets(spec);
  ball.n_offsets_ = static_cast<int>(ball.offsets_.size());

  Interner intern(ball.key_data_, ball.key_off_, ball.key_len_, ball.slots_);
  const int d = spec.d;

  std::vector<std::int32_t> key;
  key.push_back(centre.negative ? 1 : 0);
  key.insert(key.end(), centre.word.begin(), centre.word.end());
  intern.intern(key.data(), static_cast<std::uint32_t>(key.size()));
  ball.distances_.push_back(0);

  const std::size_t n_off = static_cast<std::size_t>(ball.n_offsets_);
  std::vector<std::int32_t> scratch;
  std::size_t head = 0;
  while (head < ball.distances_.size()) {
    const std::size_t v = head++;
    const int dist = ball.distances_[v];
    if (dist >= radius) break;  // discovery order is sorted by distance
    // v's key may move when key_data_ reallocates; copy it out.
    key.assign(ball.key_data_.begin() + static_cast<std::ptrdiff_t>(ball.key_off_[v]),
               ball.key_data_.begin() + static_cast<std::ptrdiff_t>(ball.key_off_[v] + ball.key_len_[v]));
    const std::uint32_t len = static_cast<std::uint32_t>(key.size());
    for (std::size_t k = 0; k < n_off; ++k) {
      scratch.assign(key.begin(), key.end());
      const std::size_t base = scratch.size() - static_cast<std::size_t>(d);
      for (int i = 0; i < d; ++i) scratch[base + i] += ball.offsets_[k].c[i];
      auto [u, inserted] = intern.intern(scratch.data(), static_cast<std::uint32_t>(scratch.size()));
      if (inserted) {
        ball.distances_.push_back(dist + 1);
        if (static_cast<std::int64_t>(ball.distances_.size()) > vertex_cap)
          throw BallTooLarge("big-world ball exceeds the vertex cap at radius " +
                             std::to_string(dist + 1));
      }
      (void)u;
    }
    long_key(key.data(), len, d, scratch);
    auto [u, inserted] = intern.intern(scratch.data(), static_cast<std::uint32_t>(scratch.size()));
    if (inserted) {
      ball.distances_.push_back(dist + 1);
      if (static_cast<std::int64_t>(ball.distances_.size()) > vertex_cap)
        throw BallTooLarge("big-world ball exceeds the vertex cap at radius " +
                           std::to_string(dist + 1));
    }
    (void)u;
  }

  // Adjacency pass: every neighbour of an interior vertex is interned by
  // now, so plain lookups suffice and boundary misses are kOutside.
  const std::size_t n = ball.distances_.size();
  ball.long_edge_.assign(n, BigWorldBall::kOutside);
  ball.short_edges_.assign(n * n_off, BigWorldBall::kOutside);
  for (std::size_t v = 0; v < n; ++v) {
    key.assign(ball.key_data_.begin() + static_cast<std::ptrdiff_t>(ball.key_off_[v]),
               ball.key_data_.begin() + static_cast<std::ptrdiff_t>(ball.key_off_[v] + ball.key_len_[v]));
    const std::uint32_t len = static_cast<std::uint32_t>(key.size());
    const std::size_t base = key.size() - static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < n_off; ++k) {
      scratch.assign(key.begin(), key.end());
      for (int i = 0; i < d; ++i) scratch[base + i] += ball.offsets_[k].c[i];
      ball.short_edges_[v * n_off + k] =
          intern.lookup(scratch.data(), static_cast<std::uint32_t>(scratch.size()));
    }
    long_key(key.data(), len, d, scratch);
    ball.long_edge_[v] = intern.lookup(scratch.data(), static_cast<std::uint32_t>(scratch.size()));
  }
  return ball;
}

ReturnProbabilityTable return_probabilities(const TorusSpec& spec, const WalkKernel& kernel,
                                            int n0, const BigWorldAddress& start,
                                            std::int64_t vertex_cap) {
  if (n0 < 0) throw InvalidArgument("horizon must be nonnegative");
  kernel.validate(spec);
  check_address(start, spec.d);

  ReturnProbabilityTable table;
  table.d = spec.d;
  table.m = spec.m;
  table.beta = kernel.beta;
  table.n0 = n0;
  table.start = start;
  table.p.assign(static_cast<std::size_t>(n0) + 1, 0.0);

  const BigWorldAddress origin = bigworld_origin(spec.d);
  const std::int64_t s0 = address_norm(start, spec);
  table.p[0] = (start == origin) ? 1.0 : 0.0;
  if (n0 == 0 || s0 > n0) return table;

  // A length-n path start -> 0 through v satisfies
  // |v| <= |start| + k and |v| <= n - k, so |v| <= (n + |start|)/2.
  const int radius = static_cast<int>((static_cast<std::int64_t>(n0) + s0 + 1) / 2);
  const BigWorldBall ball = enumerate_ball(spec, origin, radius, vertex_cap);
  const std::int32_t origin_v = 0;
  const std::int32_t start_v = ball.find(start);
  if (start_v == BigWorldBall::kOutside)
    throw InvalidArgument("start address is farther than the DP horizon");

  // Offset weights aligned with the ball's offset order (both come from
  // neighbourhood_offsets); kernel.validate guarantees the same support for
  // the simple kernel, and general kernels are matched by value.
  const auto n_off = static_cast<std::size_t>(ball.offset_count());
  std::vector<double> w(n_off, 0.0);
  for (std::size_t k = 0; k < n_off; ++k) {
    const auto it = std::find(kernel.offsets.begin(), kernel.offsets.end(), ball.offsets()[k]);
    if (it != kernel.offsets.end())
      w[k] = (1.0 - kernel.beta) *
             kernel.weights[static_cast<std::size_t>(it - kernel.offsets.begin())];
  }
  // Lazy kernels put weight on the zero offset, which neighbourhood_offsets
  // excludes; it stays on the current vertex.
  double w_stay = 0.0;
  for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
    const auto& z = kernel.offsets[k].c;
    if (std::all_of(z.begin(), z.end(), [](std::int32_t v) { return v == 0; }))
      w_stay = (1.0 - kernel.beta) * kernel.weights[k];
  }

  const std::size_t n = ball.size();
  std::vector<double> mass(n, 0.0), next(n, 0.0);
  mass[static_cast<std::size_t>(start_v)] = 1.0;
  const double beta = kernel.beta;
  for (int step = 1; step <= n0; ++step) {
    // Gather form: q is symmetric and the offset list is closed under
    // negation, so summing over v's own out-edges reproduces the in-flow.
    for (std::size_t v = 0; v < n; ++v) {
      double acc = w_stay * mass[v];
      const std::int32_t le = ball.long_edge(v);
      if (le != BigWorldBall::kOutside) acc += beta * mass[static_cast<std::size_t>(le)];
      const auto se = ball.short_edges(v);
      for (std::size_t k = 0; k < n_off; ++k)
        if (se[k] != BigWorldBall::kOutside) acc += w[k] * mass[static_cast<std::size_t>(se[k])];
      next[v] = acc;
    }
    mass.swap(next);
    table.p[static_cast<std::size_t>(step)] = mass[static_cast<std::size_t>(origin_v)];
  }
  return table;
}

ReturnProbabilityTable return_probabilities(const TorusSpec& spec, const WalkKernel& kernel,
                                            int n0, std::int64_t vertex_cap) {
  return return_probabilities(spec, kernel, n0, bigworld_origin(spec.d), vertex_cap);
}

double partial_green(const ReturnProbabilityTable& t, bool even_only) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t n = 0; n < t.p.size(); ++n) {
    if (even_only && n % 2 != 0) continue;
    const double x = t.p[n];
    const double s = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - s) + x : (x - s) + sum;
    sum = s;
  }
  return sum + comp;
}

TailEstimate geometric_tail(const ReturnProbabilityTable& t) {
  if (t.n0 < 4) throw DegenerateTail("tail extrapolation needs a horizon of at least 4");
  const double a = t.p[static_cast<std::size_t>(t.n0)];
  const double b = t.p[static_cast<std::size_t>(t.n0 - 2)];
  const double c = t.p[static_cast<std::size_t>(t.n0 - 1)];
  if (!(a > 0.0) || !(b > 0.0))
    throw DegenerateTail("vanishing even-step return probabilities at the horizon");
  const double rho2 = a / b;
  if (!(rho2 > 0.0) || rho2 >= 1.0)
    throw DegenerateTail("even-step ratio is not a contraction");
  TailEstimate est;
  est.rho2 = rho2;
  est.tail = (a + c) * rho2 / (1.0 - rho2);
  return est;
}

std::string ReturnProbabilityTable::to_csv() const {
  std::ostringstream os;
  os << "# d=" << d << ",m=" << m << ",beta=" << beta << ",n0=" << n0 << "\n";
  os << "n,p\n";
  os.precision(17);
  for (std::size_t n = 0; n < p.size(); ++n) os << n << "," << p[n] << "\n";
  return os.str();
}

SitePoint realize_phi(const SmallWorldGraph& g, const BigWorldAddress& a) {
  const TorusSpec& spec = g.spec;
  check_address(a, spec.d);
  const int n = a.components(spec.d);
  std::vector<std::int64_t> coords(static_cast<std::size_t>(spec.d), 0);
  for (int j = 0; j < n; ++j) {
    if (j > 0 || a.negative) {
      const SitePoint lp = point_of(spec, g.long_range(index_of(spec, canonical(spec, coords))));
      for (int i = 0; i < spec.d; ++i) coords[static_cast<std::size_t>(i)] = lp.c[i];
    }
    for (int i = 0; i < spec.d; ++i)
      coords[static_cast<std::size_t>(i)] += a.word[static_cast<std::size_t>(j) * spec.d + i];
  }
  return canonical(spec, coords);
}

}  // namespace swlab
