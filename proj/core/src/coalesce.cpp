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

#include "swlab/coalesce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "swlab/errors.hpp"

namespace swlab {

namespace {

template <typename F>
struct Neumaier {
  F sum = 0, comp = 0;
  void add(F v) {
    const F t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  F value() const { return sum + comp; }
};

// Alternating-series term magnitudes are handled in log space: the raw
// factorials overflow double well before the cancellation does any harm.
template <typename F>
F kingman_sum(int n, int k, double t) {
  Neumaier<F> acc;
  const F fn = static_cast<F>(n), fk = static_cast<F>(k);
  for (int j = k; j <= n; ++j) {
    const F fj = static_cast<F>(j);
    F lg = std::log(2 * fj - 1) + std::lgamma(fj + fk - 1) - std::lgamma(fk + 1) -
           std::lgamma(fk) - std::lgamma(fj - fk + 1) + std::lgamma(fn + 1) -
           std::lgamma(fj + 1) - std::lgamma(fn - fj + 1) -
           (std::lgamma(fn + fj) - std::lgamma(fj + 1) - std::lgamma(fn)) -
           static_cast<F>(t) * (fj * (fj - 1) / 2);
    F term = std::exp(lg);
    if ((j + k) % 2 != 0) term = -term;
    acc.add(term);
  }
  return acc.value();
}

// Occupancy map site -> particle slot; dense vector for small tori,
// hash map once the site count would dominate the replica's memory.
class Occupancy {
 public:
  explicit Occupancy(std::int64_t sites) : dense_(sites <= (1 << 22)) {
    if (dense_) v_.assign(static_cast<std::size_t>(sites), -1);
  }
  int find(SiteIndex s) const {
    if (dense_) return v_[s];
    const auto it = m_.find(s);
    return it == m_.end() ? -1 : it->second;
  }
  void set(SiteIndex s, int slot) {
    if (dense_)
      v_[s] = slot;
    else
      m_[s] = slot;
  }
  void clear(SiteIndex s) {
    if (dense_)
      v_[s] = -1;
    else
      m_.erase(s);
  }

 private:
  bool dense_;
  std::vector<int> v_;
  std::unordered_map<SiteIndex, int> m_;
};

}  // namespace

double kingman_pmf(int n, int k, double t) {
  if (n < 1) throw InvalidArgument("kingman_pmf: n must be >= 1");
  if (k < 1 || k > n) throw InvalidArgument("kingman_pmf: k must lie in [1, n]");
  if (!(t >= 0.0)) throw InvalidArgument("kingman_pmf: t must be >= 0");
  if (n > 40)
    throw PrecisionError(
        "kingman_pmf: the alternating sum loses all significance beyond n=40");
  double v;
  if (n > 25) {
    if (std::numeric_limits<long double>::digits <= std::numeric_limits<double>::digits)
      throw PrecisionError(
          "kingman_pmf: n > 25 needs a long double wider than double on this target");
    v = static_cast<double>(kingman_sum<long double>(n, k, t));
  } else {
    v = kingman_sum<double>(n, k, t);
  }
  if (v < 0.0 && v > -1e-9) v = 0.0;
  if (v > 1.0 && v < 1.0 + 1e-9) v = 1.0;
  return v;
}

std::vector<double> kingman_row(int n, double t) {
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) row.push_back(kingman_pmf(n, k, t));
  return row;
}

int CoalescingTrajectory::count_at(double t) const {
  int c = n0;
  for (const CoalescenceEvent& e : events) {
    if (e.time <= t)
      c = e.count_after;
    else
      break;
  }
  return c;
}

double separation_floor(std::int64_t L) {
  if (L < 2) throw InvalidArgument("separation_floor: L must be >= 2");
  const double u = std::log(std::log(static_cast<double>(L)));
  return std::max(1.0, std::ceil(u * u));
}

ExperimentPlan make_plan(const TorusSpec& spec, int n, double g_even,
                         std::vector<double> t_grid, double ip_threshold) {
  spec.validate();
  if (n < 2) throw InvalidArgument("make_plan: need n >= 2 particles");
  if (static_cast<std::int64_t>(n) > spec.site_count())
    throw InvalidArgument("make_plan: more particles than sites");
  if (!(g_even > 0.0)) throw InvalidArgument("make_plan: g_even must be positive");
  if (!(ip_threshold > 0.0))
    throw InvalidArgument("make_plan: ip_threshold must be positive");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0))
      throw InvalidArgument("make_plan: t_grid values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw InvalidArgument("make_plan: t_grid must be strictly increasing");
  }

  const double h = separation_floor(spec.L);
  const double log_ratio = 4.0 * h * std::log(static_cast<double>(spec.degree())) -
                           spec.d * std::log(2.0 * static_cast<double>(spec.L));
  if (log_ratio > std::log(ip_threshold)) {
    std::ostringstream os;
    os << "make_plan: degree^(4h)/(2L)^d = exp(" << log_ratio
       << ") exceeds the placement threshold " << ip_threshold
       << "; the torus is too small for separation " << h;
    throw InvalidArgument(os.str());
  }

  ExperimentPlan p;
  p.n = n;
  p.h_min = h;
  p.s_scale = std::pow(2.0 * static_cast<double>(spec.L), spec.d) * g_even;
  p.t_grid = std::move(t_grid);
  return p;
}

std::vector<SiteIndex> distant_sites(const TorusSpec& spec, int n, double h_min) {
  spec.validate();
  if (n < 2) throw InvalidArgument("distant_sites: need n >= 2");
  const std::int64_t two_l = 2 * spec.L;
  if (static_cast<std::int64_t>(n) > two_l)
    throw InvalidArgument("distant_sites: axis-0 placement holds at most 2L sites");

  std::vector<SitePoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    SitePoint p;
    p.c.assign(static_cast<std::size_t>(spec.d), 0);
    p.c[0] = static_cast<std::int32_t>(-spec.L +
                                       static_cast<std::int64_t>(i) * two_l / n);
    pts.push_back(std::move(p));
  }

  std::int64_t dmin = std::numeric_limits<std::int64_t>::max();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      dmin = std::min(dmin, torus_distance(spec, pts[static_cast<std::size_t>(i)],
                                           pts[static_cast<std::size_t>(j)]));
  if (!(static_cast<double>(dmin) > h_min)) {
    std::ostringstream os;
    os << "distant_sites: " << n << " sites on a 2L=" << two_l
       << " axis give minimum separation " << dmin << " <= " << h_min;
    throw InvalidArgument(os.str());
  }

  std::vector<SiteIndex> out;
  out.reserve(static_cast<std::size_t>(n));
  for (const SitePoint& p : pts) out.push_back(index_of(spec, p));
  return out;
}

CoalescingTrajectory sample_coalescing(const SmallWorldGraph& g, const KernelSampler& ks,
                                       const std::vector<SiteIndex>& starts, Rng& rng,
                                       double horizon, TimeModel tm) {
  if (!(g.spec == ks.spec()))
    throw InvalidArgument("sample_coalescing: sampler built for a different torus");
  if (!(horizon > 0.0)) throw InvalidArgument("sample_coalescing: horizon must be > 0");
  const int n0 = static_cast<int>(starts.size());
  if (n0 < 1) throw InvalidArgument("sample_coalescing: need at least one particle");
  const std::int64_t sites = g.spec.site_count();
  {
    std::unordered_set<SiteIndex> seen;
    for (SiteIndex s : starts) {
      if (static_cast<std::int64_t>(s) >= sites)
        throw InvalidArgument("sample_coalescing: start index out of range");
      if (!seen.insert(s).second)
        throw InvalidArgument("sample_coalescing: start sites must be distinct");
    }
  }

  CoalescingTrajectory tr;
  tr.n0 = n0;
  tr.horizon = horizon;
  tr.events.reserve(static_cast<std::size_t>(n0) - 1);

  Occupancy occ(sites);
  std::vector<Walker> walkers;
  walkers.reserve(static_cast<std::size_t>(n0));
  for (int i = 0; i < n0; ++i) {
    walkers.emplace_back(g.spec, starts[static_cast<std::size_t>(i)]);
    occ.set(starts[static_cast<std::size_t>(i)], i);
  }

  // Removes slot `dead`; `reregister` re-points the swapped-in walker's
  // occupancy entry (wanted only while occupancy is fully registered).
  const auto remove_slot = [&](int dead, bool reregister) {
    const int last = static_cast<int>(walkers.size()) - 1;
    if (dead != last) {
      walkers[static_cast<std::size_t>(dead)] = walkers[static_cast<std::size_t>(last)];
      if (reregister) occ.set(walkers[static_cast<std::size_t>(dead)].pos(), dead);
    }
    walkers.pop_back();
  };

  double t = 0.0;
  if (tm == TimeModel::continuous) {
    while (walkers.size() > 1) {
      t += rng.exponential(static_cast<double>(walkers.size()));
      if (t > horizon) {
        tr.censored = true;
        break;
      }
      const int mover = static_cast<int>(rng.below(walkers.size()));
      Walker& w = walkers[static_cast<std::size_t>(mover)];
      occ.clear(w.pos());
      w.step(g, ks, rng);
      const int other = occ.find(w.pos());
      if (other >= 0) {
        remove_slot(mover, /*reregister=*/true);
        tr.events.push_back({t, static_cast<int>(walkers.size())});
      } else {
        occ.set(w.pos(), mover);
      }
    }
  } else {
    while (walkers.size() > 1) {
      t += 1.0;
      if (t > horizon) {
        tr.censored = true;
        break;
      }
      for (Walker& w : walkers) {
        occ.clear(w.pos());
        w.step(g, ks, rng);
      }
      // Synchronous merge pass: slot order, first occupant of a site wins.
      for (int i = 0; i < static_cast<int>(walkers.size());) {
        const SiteIndex s = walkers[static_cast<std::size_t>(i)].pos();
        const int holder = occ.find(s);
        if (holder < 0) {
          occ.set(s, i);
          ++i;
        } else {
          remove_slot(i, /*reregister=*/false);
          tr.events.push_back({t, static_cast<int>(walkers.size())});
          // The slot now holds the swapped-in walker; reprocess index i.
        }
      }
    }
  }
  return tr;
}

}  // namespace swlab
