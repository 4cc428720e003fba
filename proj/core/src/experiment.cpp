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

#include "swlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "swlab/errors.hpp"
#include "swlab/rng.hpp"
#include "swlab/version.hpp"

namespace swlab {

namespace {

// Per-replica stream tags; keep distinct from the tags used elsewhere.
constexpr std::uint64_t kGraphTag = 1;
constexpr std::uint64_t kWalkTag = 2;

// Runs body(0..count-1) on a worker pool. The first exception wins and is
// rethrown on the caller after join; remaining workers drain quickly.
void parallel_replicas(int count, int threads, const std::function<void(int)>& body) {
  if (count <= 0) return;
  unsigned want = threads > 0 ? static_cast<unsigned>(threads)
                              : std::max(1u, std::thread::hardware_concurrency());
  want = std::min(want, static_cast<unsigned>(count));
  if (want <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(want);
  for (unsigned t = 0; t < want; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

SiteIndex constant_point(const TorusSpec& spec, std::int64_t coord) {
  return index_of(spec, canonical(spec, std::vector<std::int64_t>(spec.d, coord)));
}

SiteIndex resolve_explicit(const TorusSpec& spec, const SitePoint& p) {
  std::vector<std::int64_t> c(p.c.begin(), p.c.end());
  return index_of(spec, canonical(spec, c));
}

std::string csv_header_comment(const ExperimentConfig& c) {
  std::string line = "# ";
  line += kToolName;
  line += " ";
  line += kVersion;
  line += " config=";
  line += config_to_json(c).dump();
  line += "\n";
  return line;
}

void append_u64(std::string& out, std::uint64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_i64(std::string& out, std::int64_t v) {
  char buf[24];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string to_string(StartMode m) {
  switch (m) {
    case StartMode::explicit_sites: return "explicit";
    case StartMode::distant: return "distant";
    case StartMode::antipodal: return "antipodal";
    case StartMode::uniform: return "uniform";
    case StartMode::origin: return "origin";
  }
  throw InvalidArgument("unknown start mode");
}

StartMode start_mode_from_string(const std::string& s) {
  if (s == "explicit" || s == "explicit_sites") return StartMode::explicit_sites;
  if (s == "distant") return StartMode::distant;
  if (s == "antipodal") return StartMode::antipodal;
  if (s == "uniform") return StartMode::uniform;
  if (s == "origin") return StartMode::origin;
  throw InvalidArgument("unknown start mode: " + s);
}

std::string to_string(TimeModel m) {
  return m == TimeModel::discrete ? "discrete" : "continuous";
}

TimeModel time_model_from_string(const std::string& s) {
  if (s == "discrete") return TimeModel::discrete;
  if (s == "continuous") return TimeModel::continuous;
  throw InvalidArgument("unknown time model: " + s);
}

void ExperimentConfig::validate() const {
  if (experiment != "meet" && experiment != "hit" && experiment != "coalesce")
    throw InvalidArgument("experiment must be one of meet, hit, coalesce");
  spec.validate();
  if (!(beta >= 0.0) || !(beta < 1.0)) throw InvalidArgument("beta must lie in [0, 1)");
  if (replicas < 1) throw InvalidArgument("replicas must be >= 1");
  if (!(horizon_mult > 0.0) || !std::isfinite(horizon_mult))
    throw InvalidArgument("horizon_mult must be positive and finite");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
  for (const SitePoint& p : starts)
    if (static_cast<int>(p.c.size()) != spec.d)
      throw InvalidArgument("start point dimension mismatch");
  if (experiment == "coalesce") {
    if (n_particles < 2) throw InvalidArgument("coalesce needs n_particles >= 2");
    if (start_mode != StartMode::distant && start_mode != StartMode::explicit_sites)
      throw InvalidArgument("coalesce supports distant or explicit start modes");
    if (start_mode == StartMode::explicit_sites &&
        static_cast<int>(starts.size()) != n_particles)
      throw InvalidArgument("explicit coalesce starts must list n_particles sites");
  } else if (start_mode == StartMode::explicit_sites && starts.size() != 2) {
    throw InvalidArgument("explicit pair starts must list exactly two sites");
  }
  for (double t : t_grid)
    if (!std::isfinite(t) || t < 0.0)
      throw InvalidArgument("t_grid entries must be finite and >= 0");
}

double ExperimentConfig::horizon() const {
  return horizon_mult * static_cast<double>(spec.site_count());
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["d"] = c.spec.d;
  j["L"] = c.spec.L;
  j["m"] = c.spec.m;
  j["beta"] = c.beta;
  j["replicas"] = c.replicas;
  j["master_seed"] = c.master_seed;
  j["annealed"] = c.annealed;
  j["graph_seed"] = c.graph_seed;
  j["start_mode"] = to_string(c.start_mode);
  nlohmann::json starts = nlohmann::json::array();
  for (const SitePoint& p : c.starts) starts.push_back(p.c);
  j["starts"] = std::move(starts);
  j["n_particles"] = c.n_particles;
  j["horizon_mult"] = c.horizon_mult;
  j["time_model"] = to_string(c.time_model);
  j["lazy"] = c.lazy;
  j["threads"] = c.threads;
  j["t_grid"] = c.t_grid;
  return j;
}

std::vector<SampleRow> run_pair_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.experiment != "meet" && c.experiment != "hit")
    throw InvalidArgument("run_pair_experiment handles 'meet' and 'hit' only");
  const bool meet = c.experiment == "meet";

  WalkKernel kernel = WalkKernel::simple(c.spec, c.beta);
  if (c.lazy) kernel = WalkKernel::lazified(kernel);
  const KernelSampler ks(c.spec, kernel);
  const double horizon = c.horizon();
  const std::uint64_t sites = static_cast<std::uint64_t>(c.spec.site_count());

  const SiteIndex origin = constant_point(c.spec, 0);
  const SiteIndex antipode = constant_point(c.spec, -c.spec.L);
  if (c.start_mode == StartMode::distant) {
    // The antipodal placement realises the distant regime; refuse tori so
    // small that it is not actually distant.
    const std::int64_t dist =
        torus_distance(c.spec, point_of(c.spec, origin), point_of(c.spec, antipode));
    if (static_cast<double>(dist) <= separation_floor(c.spec.L))
      throw InvalidArgument("torus too small for a distant start");
  }

  SiteIndex fixed_x = origin;
  SiteIndex fixed_y = origin;
  switch (c.start_mode) {
    case StartMode::explicit_sites:
      fixed_x = resolve_explicit(c.spec, c.starts[0]);
      fixed_y = resolve_explicit(c.spec, c.starts[1]);
      break;
    case StartMode::distant:
    case StartMode::antipodal:
      // Meeting: both walkers move, place them at opposite poles.
      // Hitting: the walker starts at the antipode of the target.
      fixed_x = meet ? origin : antipode;
      fixed_y = meet ? antipode : origin;
      break;
    case StartMode::origin:
      fixed_x = origin;
      fixed_y = origin;
      break;
    case StartMode::uniform:
      break;  // drawn per replica from the walk stream
  }

  std::optional<SmallWorldGraph> quenched;
  if (!c.annealed) quenched.emplace(sample_small_world(c.spec, c.graph_seed));

  std::vector<SampleRow> rows(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, c.threads, [&](int r) {
    const std::uint64_t gseed =
        c.annealed ? derive_seed(c.master_seed, static_cast<std::uint64_t>(r), kGraphTag)
                   : c.graph_seed;
    std::optional<SmallWorldGraph> local;
    const SmallWorldGraph* g = nullptr;
    if (c.annealed) {
      local.emplace(sample_small_world(c.spec, gseed));
      g = &*local;
    } else {
      g = &*quenched;
    }
    const std::uint64_t wseed = derive_seed(c.master_seed, static_cast<std::uint64_t>(r), kWalkTag);
    Rng rng(wseed);
    SiteIndex x = fixed_x;
    SiteIndex y = fixed_y;
    if (c.start_mode == StartMode::uniform) {
      x = static_cast<SiteIndex>(rng.below(sites));
      y = meet ? static_cast<SiteIndex>(rng.below(sites)) : origin;
    }
    const MeetingSample s = meet
        ? sample_meeting_time(*g, ks, c.time_model, x, y, rng, horizon)
        : sample_hitting_time(*g, ks, c.time_model, x, y, rng, horizon);
    rows[static_cast<std::size_t>(r)] =
        SampleRow{r, gseed, wseed, s.x0, s.y0, s.value, s.rescaled, s.censored};
  });
  return rows;
}

EmpiricalDistribution to_distribution(const std::vector<SampleRow>& rows, bool rescaled) {
  std::vector<double> values;
  values.reserve(rows.size());
  std::size_t censored = 0;
  for (const SampleRow& r : rows) {
    if (r.censored) {
      ++censored;
    } else {
      values.push_back(rescaled ? r.rescaled : r.raw);
    }
  }
  return EmpiricalDistribution(std::move(values), censored);
}

CoalesceResult run_coalesce_experiment(const ExperimentConfig& c, double g_even) {
  c.validate();
  if (c.experiment != "coalesce")
    throw InvalidArgument("run_coalesce_experiment handles 'coalesce' only");

  CoalesceResult result;
  result.plan = make_plan(c.spec, c.n_particles, g_even, c.t_grid);
  if (c.start_mode == StartMode::explicit_sites) {
    // Caller-chosen placement: distinctness is enforced by the sampler,
    // the separation floor is the caller's responsibility.
    for (const SitePoint& p : c.starts) result.starts.push_back(resolve_explicit(c.spec, p));
  } else {
    result.starts = distant_sites(c.spec, c.n_particles, result.plan.h_min);
  }

  WalkKernel kernel = WalkKernel::simple(c.spec, c.beta);
  if (c.lazy) kernel = WalkKernel::lazified(kernel);
  const KernelSampler ks(c.spec, kernel);
  const double horizon = c.horizon();

  std::optional<SmallWorldGraph> quenched;
  if (!c.annealed) quenched.emplace(sample_small_world(c.spec, c.graph_seed));

  result.trajectories.resize(static_cast<std::size_t>(c.replicas));
  parallel_replicas(c.replicas, c.threads, [&](int r) {
    std::optional<SmallWorldGraph> local;
    const SmallWorldGraph* g = nullptr;
    if (c.annealed) {
      local.emplace(sample_small_world(
          c.spec, derive_seed(c.master_seed, static_cast<std::uint64_t>(r), kGraphTag)));
      g = &*local;
    } else {
      g = &*quenched;
    }
    Rng rng(derive_seed(c.master_seed, static_cast<std::uint64_t>(r), kWalkTag));
    result.trajectories[static_cast<std::size_t>(r)] =
        sample_coalescing(*g, ks, result.starts, rng, horizon, c.time_model);
  });
  return result;
}

std::vector<double> count_pmf_at(const CoalesceResult& r, double t) {
  if (r.trajectories.empty()) throw InvalidArgument("no trajectories");
  if (!std::isfinite(t) || t < 0.0) throw InvalidArgument("time must be finite and >= 0");
  const int n = r.plan.n;
  const double raw_time = t * r.plan.s_scale;
  std::vector<double> pmf(static_cast<std::size_t>(n), 0.0);
  const double weight = 1.0 / static_cast<double>(r.trajectories.size());
  for (const CoalescingTrajectory& traj : r.trajectories) {
    const int k = traj.count_at(raw_time);
    if (k >= 1 && k <= n) pmf[static_cast<std::size_t>(k - 1)] += weight;
  }
  return pmf;
}

std::string samples_to_csv(const ExperimentConfig& c, const std::vector<SampleRow>& rows) {
  std::string out = csv_header_comment(c);
  out += "experiment,replica,graph_seed,walk_seed,d,L,m,beta,x0,y0,raw_time,rescaled_time,censored\n";
  const std::string beta = format_double(c.beta);
  for (const SampleRow& r : rows) {
    out += c.experiment;
    out += ',';
    append_i64(out, r.replica);
    out += ',';
    append_u64(out, r.graph_seed);
    out += ',';
    append_u64(out, r.walk_seed);
    out += ',';
    append_i64(out, c.spec.d);
    out += ',';
    append_i64(out, c.spec.L);
    out += ',';
    append_i64(out, c.spec.m);
    out += ',';
    out += beta;
    out += ',';
    append_u64(out, r.x0);
    out += ',';
    append_u64(out, r.y0);
    out += ',';
    out += format_double(r.raw);
    out += ',';
    out += format_double(r.rescaled);
    out += ',';
    out += r.censored ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string trajectories_to_csv(const ExperimentConfig& c, const CoalesceResult& r) {
  std::string out = csv_header_comment(c);
  out += "replica,event_time,count\n";
  for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
    const CoalescingTrajectory& traj = r.trajectories[i];
    // Baseline row so every replica appears even before its first merge.
    append_u64(out, i);
    out += ",0,";
    append_i64(out, traj.n0);
    out += '\n';
    for (const CoalescenceEvent& e : traj.events) {
      append_u64(out, i);
      out += ',';
      out += format_double(e.time);
      out += ',';
      append_i64(out, e.count_after);
      out += '\n';
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace swlab
