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

#include "swlab/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "swlab/errors.hpp"

namespace swlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void run_replicas(int count, const std::function<void(int)>& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = std::min<unsigned>(hw, static_cast<unsigned>(count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
    });
  for (std::thread& t : pool) t.join();
}

Multigraph pair_stubs(int vertices, std::vector<int> stubs, Rng& rng) {
  for (std::size_t i = stubs.size(); i > 1; --i)
    std::swap(stubs[i - 1], stubs[rng.below(i)]);
  std::map<std::pair<int, int>, int> acc;
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
    const int u = std::min(stubs[k], stubs[k + 1]);
    const int v = std::max(stubs[k], stubs[k + 1]);
    ++acc[{u, v}];
  }
  Multigraph g;
  g.n = vertices;
  g.edges.reserve(acc.size());
  for (const auto& [e, mult] : acc) g.edges.push_back({e.first, e.second, mult});
  return g;
}

Eigen::MatrixXd dense_matrix(const SmallWorldGraph& g, const WalkKernel& kernel) {
  const int n = static_cast<int>(g.spec.site_count());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (const auto& [y, mass] : step_distribution(g, kernel, static_cast<SiteIndex>(x)))
      p(x, static_cast<int>(y)) += mass;
  return p;
}

// Applies the walk matrix without materialising it: per-offset index
// permutations plus the matching lookup.
class KernelApply {
 public:
  KernelApply(const SmallWorldGraph& g, const WalkKernel& kernel)
      : g_(g), beta_(kernel.beta), weights_(kernel.weights) {
    const std::size_t n = static_cast<std::size_t>(g.spec.site_count());
    perms_.resize(kernel.offsets.size());
    std::vector<std::int32_t> dz(static_cast<std::size_t>(g.spec.d));
    for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
      for (int i = 0; i < g.spec.d; ++i)
        dz[static_cast<std::size_t>(i)] = kernel.offsets[k].c[static_cast<std::size_t>(i)];
      auto& perm = perms_[k];
      perm.resize(n);
      for (std::size_t x = 0; x < n; ++x) {
        Walker w(g.spec, static_cast<SiteIndex>(x));
        w.move_offset(g.spec, dz.data());
        perm[x] = w.pos();
      }
    }
  }

  // y = P x.
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t n = x.size();
    y.assign(n, 0.0);
    for (std::size_t k = 0; k < perms_.size(); ++k) {
      const double w = (1.0 - beta_) * weights_[k];
      const auto& perm = perms_[k];
      for (std::size_t i = 0; i < n; ++i) y[i] += w * x[perm[i]];
    }
    if (beta_ > 0.0)
      for (std::size_t i = 0; i < n; ++i)
        y[i] += beta_ * x[g_.matching[i]];
  }

 private:
  const SmallWorldGraph& g_;
  double beta_;
  std::vector<double> weights_;
  std::vector<std::vector<SiteIndex>> perms_;
};

void deflate_and_normalise(std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double norm2 = 0.0;
  for (double& x : v) {
    x -= mean;
    norm2 += x * x;
  }
  const double norm = std::sqrt(norm2);
  if (norm > 0.0)
    for (double& x : v) x /= norm;
}

// Top eigenvalue of (P+I)/2 (sign=+1) or (I-P)/2 (sign=-1) on the
// complement of the uniform vector, by power iteration with residual
// tolerance `tol`.
double power_extreme(const KernelApply& op, std::size_t n, double sign, double tol) {
  Rng rng(0x5eed5eedULL);
  std::vector<double> x(n), px(n), ax(n);
  for (double& v : x) v = rng.uniform01() - 0.5;
  deflate_and_normalise(x);
  double mu = 0.0;
  for (int it = 0; it < 200000; ++it) {
    op.apply(x, px);
    for (std::size_t i = 0; i < n; ++i) ax[i] = 0.5 * (x[i] + sign * px[i]);
    // Rayleigh quotient and residual before renormalising.
    mu = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ax[i] - mu * x[i];
      res2 += r * r;
    }
    if (std::sqrt(res2) <= tol) return mu;
    x.swap(ax);
    deflate_and_normalise(x);
  }
  throw ConvergenceFailure("spectral_gap: power iteration stalled");
}

struct TailFit {
  double gamma = 0.0;
  double r2 = 0.0;
};

// Log-linear regression of the deviation tail (last 60% of grid points,
// values below 1e-13 are numerical zero and excluded).
TailFit fit_tail(const std::vector<double>& t, const std::vector<double>& dev) {
  std::vector<double> xs, ys;
  const std::size_t from = t.size() - std::max<std::size_t>(2, (t.size() * 6 + 9) / 10);
  for (std::size_t i = std::min(from, t.size()); i < t.size(); ++i) {
    if (dev[i] > 1e-13) {
      xs.push_back(t[i]);
      ys.push_back(std::log(dev[i]));
    }
  }
  TailFit f;
  if (xs.size() < 2) return f;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) return f;
  const double slope = sxy / sxx;
  f.gamma = -slope;
  if (syy == 0.0)
    f.r2 = 1.0;
  else
    f.r2 = (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace

Multigraph to_multigraph(const SmallWorldGraph& g) {
  g.validate();
  const std::int64_t sites = g.spec.site_count();
  Multigraph mg;
  mg.n = static_cast<int>(sites);
  std::map<std::pair<int, int>, int> acc;
  for (SiteIndex x = 0; static_cast<std::int64_t>(x) < sites; ++x) {
    for (SiteIndex y : short_range_neighbours(g.spec, x))
      if (x < y) ++acc[{static_cast<int>(x), static_cast<int>(y)}];
    const SiteIndex y = g.matching[x];
    if (x < y) ++acc[{static_cast<int>(x), static_cast<int>(y)}];
  }
  mg.edges.reserve(acc.size());
  for (const auto& [e, mult] : acc) mg.edges.push_back({e.first, e.second, mult});
  return mg;
}

Multigraph configuration_multigraph(int n, int r, Rng& rng) {
  if (n < 2 || r < 1)
    throw InvalidArgument("configuration_multigraph: need n >= 2 and r >= 1");
  if ((static_cast<std::int64_t>(n) * r) % 2 != 0)
    throw InvalidArgument("configuration_multigraph: n*r must be even");
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(r));
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < r; ++k) stubs.push_back(v);
  return pair_stubs(n, std::move(stubs), rng);
}

Multigraph configuration_multigraph(int n, int r, int h, Rng& rng) {
  if (n < 2 || r < 1 || h < 1)
    throw InvalidArgument("configuration_multigraph: need n >= 2, r >= 1, h >= 1");
  if ((static_cast<std::int64_t>(n) * r + h) % 2 != 0)
    throw InvalidArgument("configuration_multigraph: n*r + h must be even");
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(r) +
                static_cast<std::size_t>(h));
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < r; ++k) stubs.push_back(v);
  for (int k = 0; k < h; ++k) stubs.push_back(n);
  return pair_stubs(n + 1, std::move(stubs), rng);
}

IsoResult isoperimetric_exact(const Multigraph& g, int max_n) {
  if (g.n < 2) throw InvalidArgument("isoperimetric_exact: need at least 2 vertices");
  if (max_n > 30) throw InvalidArgument("isoperimetric_exact: max_n capped at 30");
  if (g.n > max_n)
    throw TooLarge("isoperimetric_exact: " + std::to_string(g.n) + " vertices exceed max_n=" +
                   std::to_string(max_n));

  // Adjacency without loops: loops never cross a cut.
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(g.n));
  std::int64_t cut0 = 0;
  for (const Multigraph::Edge& e : g.edges) {
    if (e.u == e.v) continue;
    adj[static_cast<std::size_t>(e.u)].push_back({e.v, e.mult});
    adj[static_cast<std::size_t>(e.v)].push_back({e.u, e.mult});
    if (e.u == 0 || e.v == 0) cut0 += e.mult;
  }

  std::vector<char> in(static_cast<std::size_t>(g.n), 0);
  in[0] = 1;
  std::int64_t cut = cut0;  // V = {0}
  int size = 1;
  std::int64_t best_cut = cut0, best_size = 1;
  const auto consider = [&](std::int64_t c, std::int64_t s) {
    // c/s < best_cut/best_size by cross-multiplication.
    if (c * best_size < best_cut * s) {
      best_cut = c;
      best_size = s;
    }
  };
  const std::uint32_t subsets = 1u << (g.n - 1);
  for (std::uint32_t i = 1; i < subsets; ++i) {
    const int v = std::countr_zero(i) + 1;  // Gray-code flip
    const int joined = in[static_cast<std::size_t>(v)] ? -1 : 1;
    in[static_cast<std::size_t>(v)] ^= 1;
    size += joined;
    for (const auto& [u, mult] : adj[static_cast<std::size_t>(v)])
      cut += (in[static_cast<std::size_t>(u)] == in[static_cast<std::size_t>(v)] ? -1 : 1) * mult;
    if (2 * size <= g.n) consider(cut, size);
    if (2 * (g.n - size) <= g.n && g.n - size > 0) consider(cut, g.n - size);
  }

  IsoResult res;
  const std::int64_t d = std::gcd(best_cut, best_size);
  res.cut_num = d ? best_cut / d : best_cut;
  res.size_den = d ? best_size / d : best_size;
  res.value = static_cast<double>(best_cut) / static_cast<double>(best_size);
  return res;
}

double cheeger_lower_bound(double iota, double p_min) {
  if (!(iota >= 0.0) || !(p_min >= 0.0))
    throw InvalidArgument("cheeger_lower_bound: inputs must be >= 0");
  return 0.5 * iota * iota * p_min * p_min;
}

SpectralResult spectral_gap(const SmallWorldGraph& g, const WalkKernel& kernel,
                            int dense_limit) {
  kernel.validate(g.spec);
  const std::int64_t n = g.spec.site_count();
  SpectralResult r;
  if (n <= dense_limit) {
    const Eigen::MatrixXd p = dense_matrix(g, kernel);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw ConvergenceFailure("spectral_gap: dense eigensolver failed");
    const auto& ev = es.eigenvalues();
    r.lambda1 = ev[n - 2];
    r.lambda_abs = std::max(std::abs(ev[n - 2]), std::abs(ev[0]));
    r.method = "dense";
  } else {
    const KernelApply op(g, kernel);
    const double mu_top = power_extreme(op, static_cast<std::size_t>(n), 1.0, 1e-5);
    const double mu_bot = power_extreme(op, static_cast<std::size_t>(n), -1.0, 1e-5);
    r.lambda1 = 2.0 * mu_top - 1.0;
    const double lambda_min = 1.0 - 2.0 * mu_bot;
    r.lambda_abs = std::max(std::abs(r.lambda1), std::abs(lambda_min));
    r.method = "power";
  }
  r.gap = 1.0 - r.lambda_abs;
  return r;
}

MixingProfile mixing_profile(const SmallWorldGraph& g, const WalkKernel& kernel,
                             const std::vector<double>& t_grid, int exact_limit,
                             int mc_replicas, std::uint64_t mc_seed) {
  kernel.validate(g.spec);
  if (t_grid.empty()) throw InvalidArgument("mixing_profile: empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0))
      throw InvalidArgument("mixing_profile: grid times must be >= 0");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw InvalidArgument("mixing_profile: grid must be strictly increasing");
  }
  const std::int64_t n = g.spec.site_count();
  MixingProfile mp;
  mp.t = t_grid;
  mp.deviation.reserve(t_grid.size());

  if (n <= exact_limit) {
    const Eigen::MatrixXd p = dense_matrix(g, kernel);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    if (es.info() != Eigen::Success)
      throw ConvergenceFailure("mixing_profile: dense eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    const Eigen::MatrixXd& v = es.eigenvectors();
    const double uniform = 1.0 / static_cast<double>(n);
    Eigen::MatrixXd w(n, n), m(n, n);
    for (double t : t_grid) {
      Eigen::VectorXd decay(n);
      for (std::int64_t k = 0; k < n; ++k) decay[k] = std::exp(t * (ev[k] - 1.0));
      w.noalias() = v * decay.asDiagonal();
      m.noalias() = w * v.transpose();
      mp.deviation.push_back((m.array() - uniform).abs().maxCoeff());
    }
    mp.method = "eigen";
  } else {
    if (mc_replicas < 100)
      throw InvalidArgument("mixing_profile: need at least 100 replicas");
    const KernelSampler ks(g.spec, kernel);
    std::vector<std::vector<std::int64_t>> counts(
        t_grid.size(), std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
    for (int rep = 0; rep < mc_replicas; ++rep) {
      Rng rng(derive_seed(mc_seed, static_cast<std::uint64_t>(rep), 11));
      Walker w(g.spec, 0);
      double t = 0.0;
      std::size_t gi = 0;
      while (gi < t_grid.size()) {
        const double next = t + rng.exponential(1.0);
        while (gi < t_grid.size() && next > t_grid[gi]) {
          ++counts[gi][w.pos()];
          ++gi;
        }
        if (gi >= t_grid.size()) break;
        t = next;
        w.step(g, ks, rng);
      }
    }
    const double uniform = 1.0 / static_cast<double>(n);
    for (std::size_t gi = 0; gi < t_grid.size(); ++gi) {
      double dev = 0.0;
      for (std::int64_t y = 0; y < n; ++y)
        dev = std::max(dev, std::abs(static_cast<double>(counts[gi][static_cast<std::size_t>(y)]) /
                                         mc_replicas -
                                     uniform));
      mp.deviation.push_back(dev);
      mp.mc_error.push_back(std::sqrt(std::log(2.0 / 0.05) /
                                      (2.0 * static_cast<double>(mc_replicas))));
    }
    mp.method = "monte_carlo";
  }

  const TailFit f = fit_tail(mp.t, mp.deviation);
  mp.gamma_fit = f.gamma;
  mp.r2 = f.r2;
  return mp;
}

nlohmann::json report_to_json(const SpectralReport& r) {
  nlohmann::json j;
  j["sites"] = r.sites;
  j["beta"] = r.beta;
  j["lazy"] = r.lazy;
  j["iota"] = r.iota;
  j["iota_num"] = r.iota_num;
  j["iota_den"] = r.iota_den;
  j["iota_exact"] = r.iota_exact;
  j["p_min"] = r.p_min;
  j["cheeger_lower"] = r.cheeger_lower;
  j["lambda1"] = r.lambda1;
  j["lambda_abs"] = r.lambda_abs;
  j["gamma_fit"] = r.gamma_fit;
  j["r2"] = r.r2;
  j["method"] = r.method;
  return j;
}

SpectralReport spectral_report(const SmallWorldGraph& g, const WalkKernel& kernel,
                               int iso_max_n) {
  kernel.validate(g.spec);
  SpectralReport rep;
  rep.sites = static_cast<int>(g.spec.site_count());
  rep.beta = kernel.beta;
  for (std::size_t k = 0; k < kernel.offsets.size(); ++k) {
    bool zero = true;
    for (std::int32_t c : kernel.offsets[k].c) zero = zero && c == 0;
    if (zero && kernel.weights[k] > 0.0) rep.lazy = true;
  }
  rep.p_min = min_edge_probability(kernel);

  if (rep.sites <= iso_max_n) {
    const IsoResult iso = isoperimetric_exact(to_multigraph(g), iso_max_n);
    rep.iota = iso.value;
    rep.iota_num = iso.cut_num;
    rep.iota_den = iso.size_den;
    rep.iota_exact = true;
    rep.cheeger_lower = cheeger_lower_bound(iso.value, rep.p_min);
  }

  const SpectralResult sg = spectral_gap(g, kernel);
  rep.lambda1 = sg.lambda1;
  rep.lambda_abs = sg.lambda_abs;
  rep.method = sg.method;

  const double g1 = 1.0 - sg.lambda1;
  if (g1 > 1e-9) {
    std::vector<double> grid;
    grid.reserve(25);
    const double lo = 0.5 / g1, hi = 8.0 / g1;
    for (int i = 0; i < 25; ++i) grid.push_back(lo + (hi - lo) * i / 24.0);
    const MixingProfile mp = mixing_profile(g, kernel, grid);
    rep.gamma_fit = mp.gamma_fit;
    rep.r2 = mp.r2;
    rep.method += "+" + mp.method;
  }
  return rep;
}

std::string IsoSurvey::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "# alpha=" << alpha << ",proxy=" << (proxy ? 1 : 0)
     << ",fraction_above=" << fraction_above << "\n";
  os << "sample,iota,lambda1,cheeger_lower\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    os << i << "," << rows[i].iota << "," << rows[i].lambda1 << ","
       << rows[i].cheeger_lower << "\n";
  return os.str();
}

IsoSurvey iso_survey(const TorusSpec& spec, const WalkKernel& kernel, int samples,
                     double alpha, std::uint64_t master_seed) {
  spec.validate();
  kernel.validate(spec);
  if (samples < 1) throw InvalidArgument("iso_survey: samples must be >= 1");
  if (!(alpha >= 0.0)) throw InvalidArgument("iso_survey: alpha must be >= 0");

  IsoSurvey survey;
  survey.alpha = alpha;
  survey.proxy = spec.site_count() > 24;
  survey.rows.assign(static_cast<std::size_t>(samples), {});
  const double p_min = min_edge_probability(kernel);

  run_replicas(samples, [&](int i) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(i), 7);
    const SmallWorldGraph g = sample_small_world(spec, seed);
    IsoSurveyRow row;
    row.seed = seed;
    row.lambda1 = spectral_gap(g, kernel).lambda1;
    if (!survey.proxy) {
      const IsoResult iso = isoperimetric_exact(to_multigraph(g), 24);
      row.iota = iso.value;
      row.cheeger_lower = cheeger_lower_bound(iso.value, p_min);
    } else {
      row.iota = kNaN;
      row.cheeger_lower = kNaN;
    }
    survey.rows[static_cast<std::size_t>(i)] = row;
  });

  int above = 0;
  for (const IsoSurveyRow& row : survey.rows) {
    const double stat = survey.proxy ? 1.0 - row.lambda1 : row.iota;
    if (stat > alpha) ++above;
  }
  survey.fraction_above = static_cast<double>(above) / static_cast<double>(samples);
  return survey;
}

IsoSurvey iso_survey_configuration(int n, int r, int h, int samples, double alpha,
                                   std::uint64_t master_seed) {
  if (samples < 1)
    throw InvalidArgument("iso_survey_configuration: samples must be >= 1");
  if (!(alpha >= 0.0))
    throw InvalidArgument("iso_survey_configuration: alpha must be >= 0");
  const int vertices = h > 0 ? n + 1 : n;
  if (vertices > 24)
    throw TooLarge("iso_survey_configuration: exact enumeration needs <= 24 vertices");

  IsoSurvey survey;
  survey.alpha = alpha;
  survey.rows.assign(static_cast<std::size_t>(samples), {});

  run_replicas(samples, [&](int i) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(i), 9);
    Rng rng(seed);
    const Multigraph mg = h > 0 ? configuration_multigraph(n, r, h, rng)
                                : configuration_multigraph(n, r, rng);
    IsoSurveyRow row;
    row.seed = seed;
    row.iota = isoperimetric_exact(mg, 24).value;
    row.lambda1 = kNaN;
    row.cheeger_lower = kNaN;
    survey.rows[static_cast<std::size_t>(i)] = row;
  });

  int above = 0;
  for (const IsoSurveyRow& row : survey.rows)
    if (row.iota > alpha) ++above;
  survey.fraction_above = static_cast<double>(above) / static_cast<double>(samples);
  return survey;
}

}  // namespace swlab
