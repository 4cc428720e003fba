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

#include "swlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "swlab/errors.hpp"

namespace swlab {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> values,
                                             std::size_t censored)
    : values_(std::move(values)), censored_(censored) {
  for (double v : values_)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw InvalidArgument("EmpiricalDistribution: values must be finite and >= 0");
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::censored_fraction() const {
  const std::size_t n = values_.size() + censored_;
  return n == 0 ? 0.0 : static_cast<double>(censored_) / static_cast<double>(n);
}

double EmpiricalDistribution::survival(double t) const {
  const std::size_t n = values_.size() + censored_;
  if (n == 0) return 0.0;
  const auto it = std::upper_bound(values_.begin(), values_.end(), t);
  const std::size_t above = static_cast<std::size_t>(values_.end() - it) + censored_;
  return static_cast<double>(above) / static_cast<double>(n);
}

double EmpiricalDistribution::mean() const {
  if (values_.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double EmpiricalDistribution::variance() const {
  if (values_.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double m = mean();
  double s = 0.0;
  for (double v : values_) s += (v - m) * (v - m);
  return s / static_cast<double>(values_.size() - 1);
}

double LimitLaw::survival(double t) const {
  if (t < 0.0) return 1.0;
  return (1.0 - atom) * std::exp(-t / theta);
}

LimitLaw LimitLaw::exponential(double theta) {
  if (!(theta > 0.0)) throw InvalidArgument("LimitLaw: theta must be > 0");
  return LimitLaw{0.0, theta};
}

LimitLaw LimitLaw::with_atom(double atom, double theta) {
  if (!(theta > 0.0)) throw InvalidArgument("LimitLaw: theta must be > 0");
  if (!(atom >= 0.0 && atom < 1.0))
    throw InvalidArgument("LimitLaw: atom must lie in [0,1)");
  return LimitLaw{atom, theta};
}

namespace {

void check_green(const GreenReport& g) {
  if (!(g.g_bigworld >= 1.0))
    throw InvalidArgument("limit law: G_B(0) must be >= 1");
  if (!(g.g_bigworld_even > 0.0))
    throw InvalidArgument("limit law: G^ev_B(0) must be > 0");
}

}  // namespace

LimitLaw meeting_law_distant(const GreenReport& green) {
  check_green(green);
  return LimitLaw::exponential(green.g_bigworld_even);
}

LimitLaw meeting_law_at_origin(const GreenReport& green) {
  check_green(green);
  return LimitLaw::with_atom(1.0 - 1.0 / green.g_bigworld, green.g_bigworld_even);
}

LimitLaw meeting_law_fixed(const GreenReport& green, double g_even_x) {
  check_green(green);
  if (!(g_even_x >= 0.0 && g_even_x <= green.g_bigworld_even))
    throw InvalidArgument("meeting_law_fixed: need 0 <= G^ev_B(x) <= G^ev_B(0)");
  return LimitLaw::with_atom(g_even_x / green.g_bigworld_even, green.g_bigworld_even);
}

LimitLaw hitting_law_distant(const GreenReport& green) {
  check_green(green);
  return LimitLaw::exponential(green.g_bigworld);
}

LimitLaw hitting_law_at_origin(const GreenReport& green) {
  check_green(green);
  return LimitLaw::with_atom(1.0 - 1.0 / green.g_bigworld, green.g_bigworld);
}

double ks_distance(const EmpiricalDistribution& emp, const LimitLaw& law) {
  const auto& v = emp.values();
  const std::size_t total = v.size() + emp.censored();
  if (total == 0) throw InvalidArgument("ks_distance: empty sample");
  const double n = static_cast<double>(total);
  const double cens = static_cast<double>(emp.censored());

  double d = std::abs(emp.survival(0.0) - law.survival(0.0));
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    if (v[i] > 0.0) {
      const double s_law = law.survival(v[i]);
      const double s_left = (static_cast<double>(v.size() - i) + cens) / n;
      const double s_right = (static_cast<double>(v.size() - j) + cens) / n;
      d = std::max({d, std::abs(s_left - s_law), std::abs(s_right - s_law)});
    }
    i = j;
  }
  // Past the largest observation the empirical survival stays at the
  // censored fraction while the law decays to zero.
  return std::max(d, emp.censored_fraction());
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  if (a.size() + a.censored() == 0 || b.size() + b.censored() == 0)
    throw InvalidArgument("ks_two_sample: empty sample");
  std::vector<double> ts;
  ts.reserve(a.size() + b.size() + 1);
  ts.push_back(0.0);
  ts.insert(ts.end(), a.values().begin(), a.values().end());
  ts.insert(ts.end(), b.values().begin(), b.values().end());
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  double d = std::abs(a.censored_fraction() - b.censored_fraction());
  for (double t : ts) {
    const double left = std::nextafter(t, -std::numeric_limits<double>::infinity());
    d = std::max({d, std::abs(a.survival(t) - b.survival(t)),
                  std::abs(a.survival(left) - b.survival(left))});
  }
  return d;
}

double dkw_epsilon(std::size_t n, double delta) {
  if (n == 0) throw InvalidArgument("dkw_epsilon: n must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidArgument("dkw_epsilon: delta must lie in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(n)));
}

double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0)
    throw InvalidArgument("ks_two_sample_threshold: sample sizes must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("ks_two_sample_threshold: alpha must lie in (0,1)");
  const double c = std::sqrt(std::log(2.0 / alpha) / 2.0);
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

double empirical_laplace(const EmpiricalDistribution& emp, double lambda, double scale) {
  if (!(lambda > 0.0)) throw InvalidArgument("empirical_laplace: lambda must be > 0");
  if (!(scale > 0.0)) throw InvalidArgument("empirical_laplace: scale must be > 0");
  const std::size_t total = emp.size() + emp.censored();
  if (total == 0) throw InvalidArgument("empirical_laplace: empty sample");
  double s = 0.0;
  for (double v : emp.values()) s += std::exp(-lambda * v / scale);
  return s / static_cast<double>(total);
}

std::vector<double> empirical_laplace_curve(const EmpiricalDistribution& emp,
                                            std::span<const double> lambda_grid,
                                            double scale) {
  std::vector<double> out;
  out.reserve(lambda_grid.size());
  for (double l : lambda_grid) out.push_back(empirical_laplace(emp, l, scale));
  return out;
}

double laplace_limit_distant(const GreenReport& green, double lambda) {
  return laplace_limit_fixed(green, 0.0, lambda);
}

double laplace_limit_at_origin(const GreenReport& green, double lambda) {
  check_green(green);
  if (!(lambda > 0.0)) throw InvalidArgument("laplace_limit: lambda must be > 0");
  const double denom = green.g_bigworld_even + 1.0 / lambda;
  return (denom - 0.5) / denom;
}

double laplace_limit_fixed(const GreenReport& green, double g_even_x, double lambda) {
  check_green(green);
  if (!(lambda > 0.0)) throw InvalidArgument("laplace_limit: lambda must be > 0");
  if (!(g_even_x >= 0.0 && g_even_x <= green.g_bigworld_even))
    throw InvalidArgument("laplace_limit_fixed: need 0 <= G^ev_B(x) <= G^ev_B(0)");
  return (g_even_x + 1.0 / lambda) / (green.g_bigworld_even + 1.0 / lambda);
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw InvalidArgument("total_variation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !(q[i] >= 0.0))
      throw InvalidArgument("total_variation: masses must be >= 0");
    s += std::abs(p[i] - q[i]);
  }
  return 0.5 * s;
}

TorusReference torus_meeting_reference(int d) {
  if (d < 1) throw InvalidArgument("torus_meeting_reference: d must be >= 1");
  TorusReference r;
  r.d = d;
  if (d == 1) {
    r.scale = "L^2";
    r.constant_name = "1/12";
    r.constant = 1.0 / 12.0;
  } else if (d == 2) {
    r.scale = "L^2 log L";
    r.constant_name = "1/pi";
    r.constant = 1.0 / std::numbers::pi;
  } else {
    r.scale = "L^" + std::to_string(d);
    r.constant_name = "G^ev_{Z^" + std::to_string(d) + "}(0)";
    // Half the simple-walk lattice value Ghat_{Z^3}(1); cross-checked
    // against green_lattice in the test suite.
    if (d == 3) r.constant = 0.7581930296;
  }
  return r;
}

}  // namespace swlab
