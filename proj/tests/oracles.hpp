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
//
// Test-only reference implementations. Deliberately slow and simple, and
// independent of the library's algorithms: dense linear algebra for
// small-chain expectations, uniformized matrix exponentials, and textbook
// series for lattice return probabilities.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace oracle {

// Distribution over block counts of the pure-death chain with rate k(k-1)/2
// from state n at time t, via uniformized matrix exponential. Entry [k-1]
// is P(count = k). Truncation error below 1e-13.
inline std::vector<double> kingman_expm_row(int n, double t) {
  if (n < 1) throw std::invalid_argument("n >= 1");
  const long double lam = 0.5L * n * (n - 1) + 1.0L;  // uniformization rate
  // M = I + Q/lam on states {n, n-1, ..., 1} indexed by k.
  std::vector<long double> v(static_cast<std::size_t>(n) + 1, 0.0L);
  v[static_cast<std::size_t>(n)] = 1.0L;
  std::vector<long double> acc(v.size(), 0.0L);
  const long double lt = lam * static_cast<long double>(t);
  long double weight = std::exp(-lt);  // Poisson(lt) at j=0
  long double covered = weight;
  for (std::size_t k = 0; k < v.size(); ++k) acc[k] += weight * v[k];
  for (int j = 1; j < 1000000; ++j) {
    // one uniformized step: v <- v M
    std::vector<long double> next(v.size(), 0.0L);
    for (int k = 1; k <= n; ++k) {
      const long double rate = 0.5L * k * (k - 1);
      next[static_cast<std::size_t>(k)] += v[static_cast<std::size_t>(k)] * (1.0L - rate / lam);
      if (k > 1) next[static_cast<std::size_t>(k - 1)] += v[static_cast<std::size_t>(k)] * (rate / lam);
    }
    v.swap(next);
    weight *= lt / j;
    covered += weight;
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += weight * v[k];
    if (covered > 1.0L - 1e-15L && j > lt) break;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) out[static_cast<std::size_t>(k - 1)] =
      static_cast<double>(acc[static_cast<std::size_t>(k)]);
  return out;
}

// Mean meeting time of two independent rate-1 walkers from distinct sites,
// by solving the absorbing pair chain exactly. Suits small tori only.
inline double pair_meeting_mean(const swlab::SmallWorldGraph& g, const swlab::WalkKernel& kernel,
                                swlab::SiteIndex x0, swlab::SiteIndex y0) {
  const auto n = static_cast<int>(g.spec.site_count());
  if (x0 == y0) throw std::invalid_argument("distinct starts only");
  std::vector<std::vector<std::pair<swlab::SiteIndex, double>>> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x)
    rows.push_back(swlab::step_distribution(g, kernel, static_cast<swlab::SiteIndex>(x)));

  // Transient states: ordered pairs (x, y), x != y.
  std::vector<int> id(static_cast<std::size_t>(n) * n, -1);
  std::vector<std::pair<int, int>> states;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) {
        id[static_cast<std::size_t>(x) * n + y] = static_cast<int>(states.size());
        states.emplace_back(x, y);
      }
  const int m = static_cast<int>(states.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);
  // Generator: each walker jumps at rate 1; A = -Q restricted to transient.
  for (int s = 0; s < m; ++s) {
    const auto [x, y] = states[static_cast<std::size_t>(s)];
    A(s, s) += 2.0;
    for (const auto& [xp, w] : rows[static_cast<std::size_t>(x)]) {
      if (static_cast<int>(xp) == y) continue;  // absorbed
      A(s, id[static_cast<std::size_t>(xp) * n + y]) -= w;
    }
    for (const auto& [yp, w] : rows[static_cast<std::size_t>(y)]) {
      if (static_cast<int>(yp) == x) continue;
      A(s, id[static_cast<std::size_t>(x) * n + yp]) -= w;
    }
  }
  const Eigen::VectorXd h = A.fullPivLu().solve(b);
  return h(id[static_cast<std::size_t>(x0) * n + y0]);
}

// Mean time for three coalescing rate-1 walkers to reach one particle,
// on the exact chain over unordered occupied-site sets.
inline double triple_coalescence_mean(const swlab::SmallWorldGraph& g,
                                      const swlab::WalkKernel& kernel,
                                      std::array<swlab::SiteIndex, 3> starts) {
  const auto n = static_cast<int>(g.spec.site_count());
  std::vector<std::vector<std::pair<swlab::SiteIndex, double>>> rows;
  for (int x = 0; x < n; ++x)
    rows.push_back(swlab::step_distribution(g, kernel, static_cast<swlab::SiteIndex>(x)));

  std::map<std::array<int, 3>, int> id3;  // sorted triples, distinct
  std::map<std::array<int, 2>, int> id2;  // sorted pairs, distinct
  std::vector<std::array<int, 3>> triples;
  std::vector<std::array<int, 2>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      id2[{a, b}] = static_cast<int>(pairs.size());
      pairs.push_back({a, b});
      for (int c = b + 1; c < n; ++c) {
        id3[{a, b, c}] = static_cast<int>(triples.size());
        triples.push_back({a, b, c});
      }
    }
  const int n3 = static_cast<int>(triples.size());
  const int n2 = static_cast<int>(pairs.size());
  const int m = n3 + n2;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(m);

  const auto pair_state = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    return n3 + id2.at({u, v});
  };
  for (int s = 0; s < n3; ++s) {
    const auto& tr = triples[static_cast<std::size_t>(s)];
    A(s, s) += 3.0;
    for (int mv = 0; mv < 3; ++mv) {
      const int keep1 = tr[static_cast<std::size_t>((mv + 1) % 3)];
      const int keep2 = tr[static_cast<std::size_t>((mv + 2) % 3)];
      for (const auto& [tp, w] : rows[static_cast<std::size_t>(tr[static_cast<std::size_t>(mv)])]) {
        const int p = static_cast<int>(tp);
        if (p == keep1 || p == keep2) {
          A(s, pair_state(keep1, keep2)) -= w;  // merge on landing
        } else {
          std::array<int, 3> nxt{p, keep1, keep2};
          std::sort(nxt.begin(), nxt.end());
          A(s, id3.at(nxt)) -= w;
        }
      }
    }
  }
  for (int s = 0; s < n2; ++s) {
    const auto& pr = pairs[static_cast<std::size_t>(s)];
    const int row = n3 + s;
    A(row, row) += 2.0;
    for (int mv = 0; mv < 2; ++mv) {
      const int keep = pr[static_cast<std::size_t>(1 - mv)];
      for (const auto& [tp, w] : rows[static_cast<std::size_t>(pr[static_cast<std::size_t>(mv)])]) {
        const int p = static_cast<int>(tp);
        if (p == keep) continue;  // absorbed
        A(row, pair_state(p, keep)) -= w;
      }
    }
  }
  const Eigen::VectorXd h = A.fullPivLu().solve(b);
  std::array<int, 3> st{static_cast<int>(starts[0]), static_cast<int>(starts[1]),
                        static_cast<int>(starts[2])};
  std::sort(st.begin(), st.end());
  return h(id3.at(st));
}

// log(k!)
inline double lgamma_int(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// Return probability p_{2n}(0) of the simple walk on Z^3:
// C(2n,n)/6^(2n) * sum_{j+k<=n} (n!/(j!k!(n-j-k)!))^2.
inline double z3_return_probability(int n) {
  if (n == 0) return 1.0;
  const double log_pref =
      lgamma_int(2 * n) - 2.0 * lgamma_int(n) - 2.0 * n * std::log(6.0);
  // Log-sum-exp against the largest trinomial term, so the sum never
  // overflows (the raw terms reach exp(2n log 3)).
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> lts;
  for (int j = 0; j <= n; ++j)
    for (int k = 0; k + j <= n; ++k) {
      const double lt =
          2.0 * (lgamma_int(n) - lgamma_int(j) - lgamma_int(k) - lgamma_int(n - j - k));
      lts.push_back(lt);
      lmax = std::max(lmax, lt);
    }
  double sum = 0.0;
  for (double lt : lts) sum += std::exp(lt - lmax);
  return std::exp(log_pref + lmax + std::log(sum));
}

// Partial series sum_{n<=nmax} p_{2n}(0) z^{2n} for Z^3.
inline double z3_green_series(double z, int nmax) {
  double total = 0.0;
  for (int n = 0; n <= nmax; ++n) total += z3_return_probability(n) * std::pow(z, 2 * n);
  return total;
}

}  // namespace oracle
