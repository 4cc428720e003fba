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
#include <string>
#include <vector>

#include "swlab/coalesce.hpp"
#include "swlab/stats.hpp"
#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace swlab {

enum class StartMode { explicit_sites, distant, antipodal, uniform, origin };

std::string to_string(StartMode m);
StartMode start_mode_from_string(const std::string& s);
std::string to_string(TimeModel m);
TimeModel time_model_from_string(const std::string& s);

struct ExperimentConfig {
  std::string experiment;  // meet | hit | coalesce
  TorusSpec spec;
  double beta = 0.3;
  int replicas = 1000;
  std::uint64_t master_seed = 1;
  bool annealed = true;            // fresh graph per replica
  std::uint64_t graph_seed = 1;    // quenched graph
  StartMode start_mode = StartMode::distant;
  std::vector<SitePoint> starts;   // explicit_sites mode
  int n_particles = 2;             // coalesce
  double horizon_mult = 50.0;      // horizon = mult * (2L)^d
  TimeModel time_model = TimeModel::continuous;
  bool lazy = false;
  int threads = 0;  // 0: hardware concurrency
  std::vector<double> t_grid;      // coalesce evaluation grid

  void validate() const;
  double horizon() const;
};

nlohmann::json config_to_json(const ExperimentConfig& c);

struct SampleRow {
  int replica = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t walk_seed = 0;
  SiteIndex x0 = 0;
  SiteIndex y0 = 0;
  double raw = 0.0;
  double rescaled = 0.0;
  bool censored = false;
};

// Replicas are independent tasks on a worker pool; per-replica RNG streams
// come from derive_seed(master, replica, tag), and rows are merged in
// replica order, so output is independent of scheduling.
std::vector<SampleRow> run_pair_experiment(const ExperimentConfig& c);

EmpiricalDistribution to_distribution(const std::vector<SampleRow>& rows, bool rescaled);

struct CoalesceResult {
  std::vector<CoalescingTrajectory> trajectories;
  ExperimentPlan plan;
  std::vector<SiteIndex> starts;
};

CoalesceResult run_coalesce_experiment(const ExperimentConfig& c, double g_even);

// Empirical pmf of the particle count at time s_scale * t, k = 1..n.
std::vector<double> count_pmf_at(const CoalesceResult& r, double t);

// CSV emission (ASCII, comma-separated, LF, no locale); the first line is a
// '#' comment embedding tool version and the resolved config.
std::string samples_to_csv(const ExperimentConfig& c, const std::vector<SampleRow>& rows);
std::string trajectories_to_csv(const ExperimentConfig& c, const CoalesceResult& r);

// Shortest round-trip decimal formatting (std::to_chars).
std::string format_double(double v);

}  // namespace swlab
