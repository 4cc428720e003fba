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

#include "swlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "swlab/errors.hpp"

namespace swlab {

namespace {
bool is_zero(const SitePoint& p) {
  return std::all_of(p.c.begin(), p.c.end(), [](std::int32_t v) { return v == 0; });
}
}  // namespace

void WalkKernel::validate(const TorusSpec& spec) const {
  spec.validate();
  if (!(beta >= 0.0) || !(beta < 1.0)) throw InvalidArgument("beta must lie in [0, 1)");
  if (offsets.size() != weights.size())
    throw InvalidArgument("kernel offsets and weights differ in length");
  if (offsets.empty()) throw InvalidArgument("kernel support is empty");
  double total = 0.0;
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    if (static_cast<int>(offsets[k].c.size()) != spec.d)
      throw InvalidArgument("kernel offset dimension mismatch");
    if (!(weights[k] >= 0.0)) throw InvalidArgument("kernel weights must be nonnegative");
    total += weights[k];
    for (std::int32_t v : offsets[k].c)
      if (std::abs(v) > spec.m) throw InvalidArgument("kernel offset outside the neighbourhood");
    if (spec.m == 1 && !is_zero(offsets[k])) {
      std::int64_t l1 = 0;
      for (std::int32_t v : offsets[k].c) l1 += std::abs(v);
      if (l1 > 1) throw InvalidArgument("kernel offset outside the l1 neighbourhood");
    }
    // Symmetry: the negated offset must carry the same weight.
    SitePoint neg;
    neg.c.resize(offsets[k].c.size());
    for (std::size_t i = 0; i < neg.c.size(); ++i) neg.c[i] = -offsets[k].c[i];
    const auto it = std::find(offsets.begin(), offsets.end(), neg);
    if (it == offsets.end() ||
        std::abs(weights[static_cast<std::size_t>(it - offsets.begin())] - weights[k]) > 1e-12)
      throw InvalidArgument("kernel is not symmetric under offset negation");
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("kernel weights must sum to 1");
}

WalkKernel WalkKernel::simple(const TorusSpec& spec, double beta) {
  WalkKernel k;
  k.beta = beta;
  k.offsets = neighbourhood_offsets(spec);
  k.weights.assign(k.offsets.size(), 1.0 / static_cast<double>(k.offsets.size()));
  k.validate(spec);
  return k;
}

WalkKernel WalkKernel::lazified(const WalkKernel& k) {
  WalkKernel out;
  out.beta = k.beta / 2.0;
  const double denom = 2.0 - k.beta;
  bool has_zero = false;
  for (std::size_t i = 0; i < k.offsets.size(); ++i) {
    out.offsets.push_back(k.offsets[i]);
    out.weights.push_back((1.0 - k.beta) * k.weights[i] / denom);
    if (is_zero(k.offsets[i])) {
      has_zero = true;
      out.weights.back() += 1.0 / denom;
    }
  }
  if (!has_zero) {
    SitePoint zero;
    zero.c.assign(k.offsets.front().c.size(), 0);
    out.offsets.push_back(zero);
    out.weights.push_back(1.0 / denom);
  }
  return out;
}

double min_edge_probability(const WalkKernel& k) {
  double p = k.beta > 0.0 ? k.beta : 1.0;
  for (std::size_t i = 0; i < k.offsets.size(); ++i) {
    if (is_zero(k.offsets[i])) continue;  // holding mass crosses no edge
    if (k.weights[i] > 0.0) p = std::min(p, (1.0 - k.beta) * k.weights[i]);
  }
  return p;
}

KernelSampler::KernelSampler(const TorusSpec& spec, const WalkKernel& kernel)
    : spec_(spec), beta_(kernel.beta) {
  kernel.validate(spec);
  cumulative_.reserve(kernel.weights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
    for (std::int32_t v : kernel.offsets[k].c) flat_offsets_.push_back(v);
    acc += kernel.weights[k];
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
  uniform_ = true;
  for (double w : kernel.weights)
    uniform_ = uniform_ && std::abs(w - kernel.weights.front()) <= 1e-15;
}

int KernelSampler::draw_offset(Rng& rng) const {
  const auto n = cumulative_.size();
  if (uniform_) return static_cast<int>(rng.below(n));
  const double u = rng.uniform01();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), n - 1));
}

Walker::Walker(const TorusSpec& spec, SiteIndex start) {
  std::int64_t stride = 1;
  for (int i = 0; i < spec.d; ++i) {
    strides_[static_cast<std::size_t>(i)] = stride;
    stride *= spec.side();
  }
  set_index(spec, start);
}

void Walker::set_index(const TorusSpec& spec, SiteIndex i) {
  idx_ = i;
  std::int64_t v = i;
  const std::int64_t side = spec.side();
  for (int k = 0; k < spec.d; ++k) {
    digits_[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(v % side);
    v /= side;
  }
}

void Walker::move_offset(const TorusSpec& spec, const std::int32_t* dz) {
  const std::int64_t side = spec.side();
  std::int64_t idx = idx_;
  for (int i = 0; i < spec.d; ++i) {
    const std::int32_t old = digits_[static_cast<std::size_t>(i)];
    std::int32_t nd = old + dz[i];
    if (nd >= side) nd -= static_cast<std::int32_t>(side);
    if (nd < 0) nd += static_cast<std::int32_t>(side);
    digits_[static_cast<std::size_t>(i)] = nd;
    idx += static_cast<std::int64_t>(nd - old) * strides_[static_cast<std::size_t>(i)];
  }
  idx_ = static_cast<SiteIndex>(idx);
}

void Walker::move_long(const SmallWorldGraph& g) { set_index(g.spec, g.matching[idx_]); }

void Walker::step(const SmallWorldGraph& g, const KernelSampler& ks, Rng& rng) {
  if (ks.is_long_step(rng))
    move_long(g);
  else
    move_offset(g.spec, ks.offset(ks.draw_offset(rng)));
}

std::vector<std::pair<SiteIndex, double>> step_distribution(const SmallWorldGraph& g,
                                                            const WalkKernel& kernel,
                                                            SiteIndex x) {
  std::map<SiteIndex, double> row;
  const SitePoint p = point_of(g.spec, x);
  std::vector<std::int64_t> coords(static_cast<std::size_t>(g.spec.d));
  for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
    for (int i = 0; i < g.spec.d; ++i)
      coords[static_cast<std::size_t>(i)] =
          static_cast<std::int64_t>(p.c[i]) + kernel.offsets[k].c[i];
    row[index_of(g.spec, canonical(g.spec, coords))] += (1.0 - kernel.beta) * kernel.weights[k];
  }
  if (kernel.beta > 0.0) row[g.matching[x]] += kernel.beta;
  return {row.begin(), row.end()};
}

MeetingSample sample_meeting_time(const SmallWorldGraph& g, const KernelSampler& ks,
                                  TimeModel tm, SiteIndex x, SiteIndex y, Rng& rng,
                                  double horizon) {
  MeetingSample s;
  s.x0 = x;
  s.y0 = y;
  const double n = static_cast<double>(g.spec.site_count());
  Walker wx(g.spec, x), wy(g.spec, y);
  double t = 0.0;
  if (tm == TimeModel::continuous) {
    while (true) {
      t += rng.exponential(2.0);
      if (t > horizon) break;
      if (rng.below(2) == 0)
        wx.step(g, ks, rng);
      else
        wy.step(g, ks, rng);
      if (wx.pos() == wy.pos()) {
        s.value = t;
        s.rescaled = t / n;
        return s;
      }
    }
  } else {
    while (t < horizon) {
      t += 1.0;
      wx.step(g, ks, rng);
      wy.step(g, ks, rng);
      if (wx.pos() == wy.pos()) {
        s.value = t;
        s.rescaled = t / n;
        return s;
      }
    }
  }
  s.value = horizon;
  s.rescaled = horizon / n;
  s.censored = true;
  return s;
}

MeetingSample sample_hitting_time(const SmallWorldGraph& g, const KernelSampler& ks,
                                  TimeModel tm, SiteIndex x, SiteIndex target, Rng& rng,
                                  double horizon) {
  MeetingSample s;
  s.x0 = x;
  s.y0 = target;
  const double n = static_cast<double>(g.spec.site_count());
  Walker w(g.spec, x);
  double t = 0.0;
  if (tm == TimeModel::continuous) {
    while (true) {
      t += rng.exponential(1.0);
      if (t > horizon) break;
      w.step(g, ks, rng);
      if (w.pos() == target) {
        s.value = t;
        s.rescaled = t / n;
        return s;
      }
    }
  } else {
    while (t < horizon) {
      t += 1.0;
      w.step(g, ks, rng);
      if (w.pos() == target) {
        s.value = t;
        s.rescaled = t / n;
        return s;
      }
    }
  }
  s.value = horizon;
  s.rescaled = horizon / n;
  s.censored = true;
  return s;
}

StationaryCheckResult stationary_check(const SmallWorldGraph& g, const WalkKernel& kernel,
                                       int sample_rows, std::uint64_t seed) {
  StationaryCheckResult res;
  const std::int64_t n = g.spec.site_count();
  Rng rng(seed);
  auto row_of = [&](SiteIndex x) { return step_distribution(g, kernel, x); };
  for (int s = 0; s < sample_rows; ++s) {
    const SiteIndex x = static_cast<SiteIndex>(rng.below(static_cast<std::uint64_t>(n)));
    const auto row = row_of(x);
    double total = 0.0;
    for (const auto& [y, p] : row) {
      total += p;
      // p(y -> x) from y's own row.
      const auto back = row_of(y);
      double pyx = 0.0;
      for (const auto& [z, q] : back)
        if (z == x) pyx = q;
      res.max_asymmetry = std::max(res.max_asymmetry, std::abs(pyx - p));
    }
    res.max_row_error = std::max(res.max_row_error, std::abs(total - 1.0));

    // Column sum at x: only x's own neighbours (offsets are closed under
    // negation) and its long-range partner can step to x.
    double col = 0.0;
    std::vector<SiteIndex> sources = short_range_neighbours(g.spec, x);
    sources.push_back(g.matching[x]);
    sources.push_back(x);
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    for (SiteIndex u : sources)
      for (const auto& [z, q] : row_of(u))
        if (z == x) col += q;
    res.max_column_error = std::max(res.max_column_error, std::abs(col - 1.0));
  }
  res.ok = res.max_row_error <= 1e-12 && res.max_column_error <= 1e-12 &&
           res.max_asymmetry <= 1e-12;
  return res;
}

}  // namespace swlab
