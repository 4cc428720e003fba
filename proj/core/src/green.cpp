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

#include "swlab/green.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swlab/bigworld.hpp"
#include "swlab/errors.hpp"
#include "swlab/walk.hpp"

namespace swlab {

namespace {

struct Rule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on P_n; cached per order.
const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  Rule r;
  r.x.assign(static_cast<std::size_t>(n), 0.0);
  r.w.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[static_cast<std::size_t>(i)] = -x;
    r.x[static_cast<std::size_t>(n - 1 - i)] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[static_cast<std::size_t>(i)] = w;
    r.w[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return cache.emplace(n, std::move(r)).first->second;
}

Rule mapped_rule(int n, double lo, double hi) {
  const Rule& base = gauss_legendre(n);
  Rule out;
  out.x.reserve(static_cast<std::size_t>(n));
  out.w.reserve(static_cast<std::size_t>(n));
  const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
  for (int k = 0; k < n; ++k) {
    out.x.push_back(c + h * base.x[static_cast<std::size_t>(k)]);
    out.w.push_back(h * base.w[static_cast<std::size_t>(k)]);
  }
  return out;
}

// Sum over the tensor box selected by `mask` (bit i set = axis i on the
// outer panel) of w_prod / (1 - z * (sum cos theta_i) / d).
double box_sum(int d, double z, const std::vector<double>& ci,
               const std::vector<double>& wi, const std::vector<double>& co,
               const std::vector<double>& wo, unsigned mask) {
  struct Frame {
    const std::vector<double>* c;
    const std::vector<double>* w;
  };
  std::vector<Frame> axes(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i)
    axes[static_cast<std::size_t>(i)] =
        (mask >> i) & 1u ? Frame{&co, &wo} : Frame{&ci, &wi};

  const double zd = z / d;
  auto rec = [&](auto&& self, int axis, double wprod, double csum) -> double {
    const auto& c = *axes[static_cast<std::size_t>(axis)].c;
    const auto& w = *axes[static_cast<std::size_t>(axis)].w;
    double acc = 0.0;
    if (axis == d - 1) {
      for (std::size_t k = 0; k < c.size(); ++k)
        acc += w[k] / (1.0 - zd * (csum + c[k]));
      return wprod * acc;
    }
    for (std::size_t k = 0; k < c.size(); ++k)
      acc += self(self, axis + 1, wprod * w[k], csum + c[k]);
    return acc;
  };
  return rec(rec, 0, 1.0, 0.0);
}

// Central cube [0,a]^d folded onto the region where theta_1 is maximal:
// theta = a*t*(1, xi_1, ..., xi_{d-1}) gives d * a^d * Int t^{d-1} F dt dxi
// with a smooth integrand even at z=1 (the t^{d-1} factor cancels the
// quadratic zero of the denominator at t=0).
double pyramid_sum(int d, double z, double a, int n) {
  const Rule unit = mapped_rule(n, 0.0, 1.0);
  const double zd = z / d;
  double acc = 0.0;
  std::vector<double> cxi(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = unit.x[static_cast<std::size_t>(i)];
    const double ct = std::cos(a * t);
    for (int j = 0; j < n; ++j)
      cxi[static_cast<std::size_t>(j)] = std::cos(a * t * unit.x[static_cast<std::size_t>(j)]);
    auto rec = [&](auto&& self, int axis, double wprod, double csum) -> double {
      double s = 0.0;
      if (axis == d - 1) {
        for (int k = 0; k < n; ++k)
          s += unit.w[static_cast<std::size_t>(k)] /
               (1.0 - zd * (csum + cxi[static_cast<std::size_t>(k)]));
        return wprod * s;
      }
      for (int k = 0; k < n; ++k)
        s += self(self, axis + 1, wprod * unit.w[static_cast<std::size_t>(k)],
                  csum + cxi[static_cast<std::size_t>(k)]);
      return s;
    };
    const double inner = d == 1 ? 1.0 : rec(rec, 1, 1.0, ct);
    acc += unit.w[static_cast<std::size_t>(i)] * std::pow(t, d - 1) * inner;
  }
  return d * std::pow(a, d) * acc;
}

std::vector<std::string> split_methods(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t next = s.find("; ", pos);
    if (next == std::string::npos) {
      out.push_back(s.substr(pos));
      break;
    }
    out.push_back(s.substr(pos, next - pos));
    pos = next + 2;
  }
  return out;
}

}  // namespace

double phi_z2(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

double green_lattice(int d, double z, const QuadratureOptions& opts) {
  if (d < 3)
    throw Divergent("green_lattice: Ghat_{Z^d} diverges at z=1 for d=" + std::to_string(d) +
                    "; only d >= 3 is supported");
  if (!(z >= 0.0 && z <= 1.0))
    throw InvalidArgument("green_lattice: z must lie in [0,1]");
  if (!(opts.split > 0.0 && opts.split < std::numbers::pi))
    throw InvalidArgument("green_lattice: split must lie in (0, pi)");
  if (opts.outer_nodes < 4 || opts.inner_nodes < 4 || opts.pyramid_nodes < 4)
    throw InvalidArgument("green_lattice: node counts must be >= 4");
  if (opts.max_doublings < 1 || !(opts.rel_tol > 0.0))
    throw InvalidArgument("green_lattice: need max_doublings >= 1 and rel_tol > 0");
  if (z == 0.0) return 1.0;

  // Per-axis node counts shrink with dimension to keep the tensor grids
  // tractable; accuracy requirements are pinned at d=3.
  const int shift = d > 3 ? 2 * (d - 3) : 0;
  const int outer = std::max(16, opts.outer_nodes >> shift);
  const int inner = std::max(8, opts.inner_nodes >> shift);
  const int pyr = std::max(12, opts.pyramid_nodes >> shift);
  const double worst =
      std::pow(static_cast<double>(outer), d) * (1 << d) +
      std::pow(static_cast<double>(pyr) * (1 << opts.max_doublings), d);
  if (worst > 6e8)
    throw TooLarge("green_lattice: tensor grid would need ~" + std::to_string(worst) +
                   " evaluations at d=" + std::to_string(d));

  const double a = opts.split;
  const Rule in = mapped_rule(inner, 0.0, a);
  const Rule out = mapped_rule(outer, a, std::numbers::pi);
  std::vector<double> ci(in.x.size()), co(out.x.size());
  for (std::size_t k = 0; k < in.x.size(); ++k) ci[k] = std::cos(in.x[k]);
  for (std::size_t k = 0; k < out.x.size(); ++k) co[k] = std::cos(out.x[k]);

  double boxes = 0.0;
  for (unsigned mask = 1; mask < (1u << d); ++mask)
    boxes += box_sum(d, z, ci, in.w, co, out.w, mask);

  double prev = pyramid_sum(d, z, a, pyr);
  for (int k = 1; k <= opts.max_doublings; ++k) {
    const double next = pyramid_sum(d, z, a, pyr << k);
    const double total = boxes + next;
    if (std::abs(next - prev) <= opts.rel_tol * std::abs(total))
      return total / std::pow(std::numbers::pi, d);
    prev = next;
  }
  std::ostringstream os;
  os << "green_lattice: central-cube refinement stalled at d=" << d << ", z=" << z;
  throw QuadratureFailure(os.str());
}

PhiFunction PhiFunction::closed_form_z1() {
  PhiFunction f;
  f.d_ = 1;
  f.s_max_ = std::numeric_limits<double>::infinity();
  return f;
}

double PhiFunction::operator()(double s) const {
  if (!(s >= 0.0)) throw InvalidArgument("Phi: argument must be >= 0");
  if (table_s_.empty()) return std::sqrt(1.0 + s * s);
  if (s > s_max_) {
    if (s <= s_max_ * (1.0 + 1e-12)) {
      s = s_max_;
    } else {
      std::ostringstream os;
      os << "Phi: s=" << s << " beyond the table domain s_max=" << s_max_;
      throw DomainExceeded(os.str());
    }
  }
  const auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
  std::size_t i = it == table_s_.begin()
                      ? 0
                      : static_cast<std::size_t>(it - table_s_.begin()) - 1;
  if (i >= table_s_.size() - 1) i = table_s_.size() - 2;
  const double h = table_s_[i + 1] - table_s_[i];
  const double t = (s - table_s_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * table_phi_[i] +
         (t3 - 2.0 * t2 + t) * h * slopes_[i] +
         (-2.0 * t3 + 3.0 * t2) * table_phi_[i + 1] +
         (t3 - t2) * h * slopes_[i + 1];
}

PhiFunction build_phi_lattice(int d, const QuadratureOptions& opts) {
  if (d == 1) return PhiFunction::closed_form_z1();
  if (d == 2)
    throw Divergent("build_phi_lattice: d=2 is recurrent, Ghat diverges at z=1");
  if (d < 1) throw InvalidArgument("build_phi_lattice: d must be >= 1");

  // z-grid: coarse up to 0.90, then 0.005 steps, then a geometric-style
  // cluster hugging z=1 where s(z) has its square-root approach to s_max.
  std::vector<double> zs;
  zs.reserve(72);
  for (int i = 0; i < 45; ++i) zs.push_back(0.02 + 0.88 * i / 44.0);
  for (int i = 1; i <= 19; ++i) zs.push_back(0.90 + 0.005 * i);
  for (double z : {0.996, 0.997, 0.998, 0.999, 0.9995, 0.9998, 0.9999, 1.0})
    zs.push_back(z);

  PhiFunction f;
  f.d_ = d;
  f.table_s_.reserve(zs.size() + 1);
  f.table_phi_.reserve(zs.size() + 1);
  f.table_s_.push_back(0.0);
  f.table_phi_.push_back(1.0);
  for (double z : zs) {
    const double g = green_lattice(d, z, opts);
    const double s = z * g;
    if (!(s > f.table_s_.back() && g > f.table_phi_.back())) {
      std::ostringstream os;
      os << "build_phi_lattice: table not strictly increasing at z=" << z;
      throw QuadratureFailure(os.str());
    }
    f.table_s_.push_back(s);
    f.table_phi_.push_back(g);
  }
  f.s_max_ = f.table_s_.back();

  // Fritsch-Carlson monotone cubic Hermite slopes. The last slope is pinned
  // to 1: both s(z) and Phi(z) approach the endpoint like c - c'*sqrt(1-z),
  // so dPhi/ds -> 1/z -> 1 there, and the generic one-sided secant would
  // undershoot badly on the clustered end panel.
  const std::size_t n = f.table_s_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = f.table_s_[i + 1] - f.table_s_[i];
    delta[i] = (f.table_phi_[i + 1] - f.table_phi_[i]) / h[i];
  }
  f.slopes_.assign(n, 0.0);
  f.slopes_[0] = delta[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    f.slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
  }
  f.slopes_[n - 1] = std::min(1.0, 3.0 * delta[n - 2]);
  return f;
}

double bigworld_green_fixed_point(double beta, const PhiFunction& phi,
                                  double hint_hi, double tol) {
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidArgument("bigworld_green_fixed_point: beta must lie in (0,1)");
  if (!(tol > 0.0)) throw InvalidArgument("bigworld_green_fixed_point: tol must be > 0");

  const auto f = [&](double t) {
    return phi_z2(beta * t) + phi((1.0 - beta) * t) - 1.0 - t;
  };
  const double dom = std::isinf(phi.s_max())
                         ? std::numeric_limits<double>::infinity()
                         : phi.s_max() / (1.0 - beta);

  double lo = std::max(1.0, 1.0 / (1.0 - beta * beta));
  if (lo > dom) {
    std::ostringstream os;
    os << "fixed point: lower bound " << lo << " already outside the Phi domain (t <= "
       << dom << ")";
    throw DomainExceeded(os.str());
  }
  const double flo = f(lo);
  if (flo < 0.0) {
    if (flo > -1e-12) return lo;
    std::ostringstream os;
    os << "fixed point: f(" << lo << ")=" << flo << " < 0 below the a-priori lower bound";
    throw NoBracket(os.str());
  }

  double hi = std::max(hint_hi, 2.0 * lo);
  bool at_edge = false;
  if (hi >= dom) {
    hi = dom;
    at_edge = true;
  }
  double fhi = f(hi);
  for (int guard = 0; fhi > 0.0; ++guard) {
    if (at_edge) {
      std::ostringstream os;
      os << "fixed point: no sign change inside the Phi domain; f(" << hi << ")=" << fhi;
      throw DomainExceeded(os.str());
    }
    if (guard > 200)
      throw NoBracket("fixed point: no sign change found while expanding the bracket");
    hi *= 2.0;
    if (hi >= dom) {
      hi = dom;
      at_edge = true;
    }
    fhi = f(hi);
  }

  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

GreenReport solve_bigworld_green(int d, double beta, const GreenSolveOptions& opts,
                                 const PhiFunction* phi) {
  if (d == 2)
    throw Divergent("solve_bigworld_green: d=2 has no Phi table (recurrent lattice)");
  if (d < 1 || d > 8) throw InvalidArgument("solve_bigworld_green: d must be in [1,8]");
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidArgument("solve_bigworld_green: beta must lie in (0,1)");
  if (opts.dp_horizon < 4)
    throw InvalidArgument("solve_bigworld_green: dp_horizon must be >= 4");

  PhiFunction local;
  if (phi != nullptr) {
    if (phi->dimension() != d)
      throw InvalidArgument("solve_bigworld_green: Phi table built for d=" +
                            std::to_string(phi->dimension()));
  } else {
    local = build_phi_lattice(d, opts.quadrature);
    phi = &local;
  }

  // The cross-check ball has ~M^(n0/2) vertices; for d >= 3 the horizon is
  // clamped so the radius-(n0/2) ball stays in the tens of thousands.
  const int n0 = d >= 2 ? std::min(opts.dp_horizon, 12) : opts.dp_horizon;
  TorusSpec ts;
  ts.d = d;
  ts.L = 2;
  ts.m = 1;
  const WalkKernel kernel = WalkKernel::simple(ts, beta);
  const ReturnProbabilityTable tab = return_probabilities(ts, kernel, n0, opts.ball_cap);
  const double dp_partial = partial_green(tab, /*even_only=*/false);
  double dp_extrapolated = dp_partial;
  std::string tail_method = "dp cross-check: partial sum + geometric tail, n0=" +
                            std::to_string(n0);
  try {
    dp_extrapolated = dp_partial + geometric_tail(tab).tail;
  } catch (const DegenerateTail&) {
    tail_method = "dp cross-check: partial sum only (degenerate tail), n0=" +
                  std::to_string(n0);
  }

  const double hint =
      std::max({4.0 * dp_extrapolated, 2.0 / (1.0 - beta * beta), 4.0});
  const double root = bigworld_green_fixed_point(beta, *phi, hint, opts.bisection_tol);
  if (root + 1e-9 < dp_partial) {
    std::ostringstream os;
    os << "solve_bigworld_green: fixed point " << root
       << " falls below the exact partial sum " << dp_partial;
    throw ConvergenceFailure(os.str());
  }

  GreenReport r;
  r.d = d;
  r.beta = beta;
  if (d >= 3) r.g_torus_limit = phi->s_max();
  r.g_bigworld = root;
  r.g_bigworld_even = root / 2.0;
  r.dp_partial = dp_partial;
  r.dp_extrapolated = dp_extrapolated;
  r.dp_horizon = n0;
  r.fixed_point_residual =
      std::abs(phi_z2(beta * root) + (*phi)((1.0 - beta) * root) - 1.0 - root);
  r.lower_bound_check = root >= 1.0 / (1.0 - beta * beta) - 1e-9;
  r.method = (phi->closed_form()
                  ? std::string("phi: closed form sqrt(1+s^2)")
                  : "phi: parametric quadrature table (" +
                        std::to_string(phi->table_s().size()) +
                        " points), monotone cubic") +
             "; root: bracketed bisection from max(1, 1/(1-beta^2)); " + tail_method;
  return r;
}

nlohmann::json report_to_json(const GreenReport& r) {
  nlohmann::json j;
  j["d"] = r.d;
  j["beta"] = r.beta;
  j["G_torus_limit"] =
      r.g_torus_limit ? nlohmann::json(*r.g_torus_limit) : nlohmann::json(nullptr);
  j["G_bigworld"] = r.g_bigworld;
  j["G_bigworld_even"] = r.g_bigworld_even;
  j["dp_partial"] = r.dp_partial;
  j["dp_extrapolated"] = r.dp_extrapolated;
  j["dp_horizon"] = r.dp_horizon;
  j["fixed_point_residual"] = r.fixed_point_residual;
  j["lower_bound_check"] = r.lower_bound_check;
  j["methods"] = split_methods(r.method);
  return j;
}

std::string BetaScanResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "# d=" << d << "\n";
  if (crossing)
    os << "# crossing=[" << crossing->first << "," << crossing->second << "]\n";
  os << "beta,G_lattice,G_bigworld,diff\n";
  for (const BetaScanRow& r : rows)
    os << r.beta << "," << r.g_lattice << "," << r.g_bigworld << "," << r.diff << "\n";
  return os.str();
}

BetaScanResult beta_comparison_scan(int d, const std::vector<double>& beta_grid,
                                    const QuadratureOptions& opts) {
  if (d < 3)
    throw Divergent("beta_comparison_scan: needs a transient lattice (d >= 3)");
  if (beta_grid.size() < 2)
    throw InvalidArgument("beta_comparison_scan: grid needs at least two points");
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    if (!(beta_grid[i] > 0.0 && beta_grid[i] < 1.0))
      throw InvalidArgument("beta_comparison_scan: grid values must lie in (0,1)");
    if (i > 0 && !(beta_grid[i] > beta_grid[i - 1]))
      throw InvalidArgument("beta_comparison_scan: grid must be strictly increasing");
  }

  const PhiFunction phi = build_phi_lattice(d, opts);
  const double g_lat = phi.s_max();  // z=1 is the last table point
  const auto root_at = [&](double b) {
    const double hint = std::max({4.0 * g_lat, 2.0 / (1.0 - b * b), 4.0});
    return bigworld_green_fixed_point(b, phi, hint);
  };

  BetaScanResult res;
  res.d = d;
  res.rows.reserve(beta_grid.size());
  for (double b : beta_grid) {
    const double g_b = root_at(b);
    res.rows.push_back({b, g_lat, g_b, g_lat - g_b});
  }

  if (!(res.rows.front().diff > 0.0 && res.rows.back().diff < 0.0)) {
    std::ostringstream os;
    os << "beta_comparison_scan: expected sign + at beta=" << res.rows.front().beta
       << " and - at beta=" << res.rows.back().beta << "; got "
       << res.rows.front().diff << " and " << res.rows.back().diff;
    throw Error("sign_check_failed", os.str());
  }

  for (std::size_t i = 0; i + 1 < res.rows.size(); ++i) {
    if (res.rows[i].diff > 0.0 && res.rows[i + 1].diff <= 0.0) {
      double lo = res.rows[i].beta, hi = res.rows[i + 1].beta;
      while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (g_lat - root_at(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      res.crossing = std::make_pair(lo, hi);
      break;
    }
  }
  return res;
}

}  // namespace swlab
