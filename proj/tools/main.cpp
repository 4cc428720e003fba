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
// swlab: reproducible experiment runner. Every subcommand emits artifacts
// embedding the resolved config and the tool version; identical config and
// seed reproduce outputs byte for byte.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swlab/errors.hpp"
#include "swlab/experiment.hpp"
#include "swlab/green.hpp"
#include "swlab/spectral.hpp"
#include "swlab/stats.hpp"
#include "swlab/version.hpp"

namespace {

using nlohmann::json;
using namespace swlab;

json tool_stamp() { return json{{"name", kToolName}, {"version", kVersion}}; }

std::string default_outdir() {
  const char* env = std::getenv("SWLAB_OUTDIR");
  return env && *env ? env : ".";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

void emit(const std::filesystem::path& path, const std::string& content, bool echo) {
  write_file(path, content);
  std::cerr << "wrote " << path.string() << "\n";
  if (echo) std::cout << content;
}

std::string comment_line(const json& config) {
  std::string line = "# ";
  line += kToolName;
  line += " ";
  line += kVersion;
  line += " config=";
  line += config.dump();
  line += "\n";
  return line;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  return j;
}

template <typename T>
void maybe(const json& cfg, const char* key, T& target) {
  if (!cfg.contains(key)) return;
  try {
    target = cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config key '") + key + "': " + e.what());
  }
}

// Experiment flags shared by meet / hit / coalesce.
struct RunArgs {
  ExperimentConfig c;
  std::string start = "distant";
  std::string time = "continuous";
  std::vector<std::int64_t> x0, y0;  // explicit pair starts
  bool quenched = false;
  double ks_tol = 0.05;
  std::string out = default_outdir();
  std::string config_path;
};

void apply_config(const json& cfg, RunArgs& a) {
  maybe(cfg, "d", a.c.spec.d);
  maybe(cfg, "L", a.c.spec.L);
  maybe(cfg, "m", a.c.spec.m);
  maybe(cfg, "beta", a.c.beta);
  maybe(cfg, "replicas", a.c.replicas);
  maybe(cfg, "master_seed", a.c.master_seed);
  maybe(cfg, "annealed", a.c.annealed);
  maybe(cfg, "graph_seed", a.c.graph_seed);
  maybe(cfg, "start_mode", a.start);
  maybe(cfg, "n_particles", a.c.n_particles);
  maybe(cfg, "horizon_mult", a.c.horizon_mult);
  maybe(cfg, "time_model", a.time);
  maybe(cfg, "lazy", a.c.lazy);
  maybe(cfg, "threads", a.c.threads);
  maybe(cfg, "t_grid", a.c.t_grid);
  if (cfg.contains("starts")) {
    a.c.starts.clear();
    for (const auto& arr : cfg.at("starts")) {
      SitePoint p;
      for (const auto& v : arr) p.c.push_back(v.get<std::int32_t>());
      a.c.starts.push_back(std::move(p));
    }
  }
  a.quenched = !a.c.annealed;
}

void add_run_flags(CLI::App* cmd, RunArgs& a, bool pair) {
  cmd->add_option("--config", a.config_path, "JSON config file; flags given here override it");
  cmd->add_option("--out", a.out, "output directory (default $SWLAB_OUTDIR or .)");
  cmd->add_option("--d", a.c.spec.d, "torus dimension");
  cmd->add_option("--L", a.c.spec.L, "half side; the torus is (Z mod 2L)^d");
  cmd->add_option("--m", a.c.spec.m, "short-range radius");
  cmd->add_option("--beta", a.c.beta, "long-range step probability, in [0,1)");
  cmd->add_option("--replicas", a.c.replicas, "independent runs");
  cmd->add_option("--seed", a.c.master_seed, "master seed");
  auto* q = cmd->add_flag("--quenched", a.quenched, "fix one graph (see --graph-seed)");
  cmd->add_flag_callback(
         "--annealed", [&a]() { a.quenched = false; },
         "resample the graph each replica (default)")
      ->excludes(q);
  cmd->add_option("--graph-seed", a.c.graph_seed, "graph seed in quenched mode");
  cmd->add_option("--start", a.start,
                  "start mode: distant | antipodal | uniform | origin | explicit");
  if (pair) {
    cmd->add_option("--x0", a.x0, "explicit start, comma-separated coordinates")
        ->delimiter(',');
    cmd->add_option("--y0", a.y0, "explicit second start / target")->delimiter(',');
  } else {
    cmd->add_option("--n", a.c.n_particles, "number of particles");
    cmd->add_option("--t-grid", a.c.t_grid, "rescaled evaluation times")->delimiter(',');
  }
  cmd->add_option("--horizon-mult", a.c.horizon_mult, "censor horizon as a multiple of (2L)^d");
  cmd->add_option("--time", a.time, "time model: continuous | discrete");
  cmd->add_flag("--lazy", a.c.lazy, "lazify the kernel, P' = (I+P)/2");
  cmd->add_option("--threads", a.c.threads, "worker threads (0 = hardware)");
  cmd->add_option("--ks-tol", a.ks_tol, "pass threshold on the KS distance");
}

void finalize(RunArgs& a, const std::string& experiment) {
  a.c.experiment = experiment;
  a.c.annealed = !a.quenched;
  a.c.start_mode = start_mode_from_string(a.start);
  a.c.time_model = time_model_from_string(a.time);
  if (!a.x0.empty() || !a.y0.empty()) {
    if (a.x0.empty() || a.y0.empty())
      throw InvalidArgument("--x0 and --y0 must be given together");
    a.c.start_mode = StartMode::explicit_sites;
    a.c.starts.clear();
    SitePoint px, py;
    for (std::int64_t v : a.x0) px.c.push_back(static_cast<std::int32_t>(v));
    for (std::int64_t v : a.y0) py.c.push_back(static_cast<std::int32_t>(v));
    a.c.starts = {px, py};
  }
}

// Green report for the law constants; null when no finite constant exists
// (d=2, or beta outside the fixed point's domain).
std::optional<GreenReport> try_green(int d, double beta) {
  try {
    GreenSolveOptions opts;
    return solve_bigworld_green(d, beta, opts);
  } catch (const Error&) {
    return std::nullopt;
  }
}

int cmd_pair(RunArgs& a, const std::string& experiment) {
  finalize(a, experiment);
  const bool meet = experiment == "meet";
  std::vector<SampleRow> rows = run_pair_experiment(a.c);
  EmpiricalDistribution dist = to_distribution(rows, /*rescaled=*/true);

  json summary;
  summary["tool"] = tool_stamp();
  summary["config"] = config_to_json(a.c);
  summary["N"] = a.c.replicas;
  summary["censored_fraction"] = dist.censored_fraction();
  summary["mean_rescaled"] = dist.size() ? json(dist.mean()) : json(nullptr);
  summary["dkw_eps"] = dkw_epsilon(static_cast<std::size_t>(a.c.replicas), 0.05);

  std::optional<GreenReport> green = try_green(a.c.spec.d, a.c.beta);
  if (green) {
    const bool at_origin = a.c.start_mode == StartMode::origin;
    const LimitLaw law = meet ? (at_origin ? meeting_law_at_origin(*green)
                                           : meeting_law_distant(*green))
                              : (at_origin ? hitting_law_at_origin(*green)
                                           : hitting_law_distant(*green));
    const double ks = ks_distance(dist, law);
    summary["law"] = json{{"name", std::string(meet ? "meeting" : "hitting") +
                                       (at_origin ? "_at_origin" : "_distant")},
                          {"atom", law.atom},
                          {"theta", law.theta}};
    summary["green"] = json{{"G_bigworld", green->g_bigworld},
                            {"G_bigworld_even", green->g_bigworld_even}};
    summary["ks"] = ks;
    summary["pass"] = ks <= a.ks_tol;
  } else {
    summary["law"] = nullptr;
    summary["green"] = nullptr;
    summary["ks"] = nullptr;
    summary["pass"] = nullptr;
  }

  const std::filesystem::path dir(a.out);
  write_file(dir / (experiment + "_samples.csv"), samples_to_csv(a.c, rows));
  std::cerr << "wrote " << (dir / (experiment + "_samples.csv")).string() << "\n";
  emit(dir / (experiment + "_summary.json"), summary.dump(2) + "\n", /*echo=*/true);
  return 0;
}

int cmd_coalesce(RunArgs& a) {
  finalize(a, "coalesce");
  if (a.c.t_grid.empty()) a.c.t_grid = {1.0};
  std::optional<GreenReport> green = try_green(a.c.spec.d, a.c.beta);
  if (!green)
    throw Divergent("coalescence rescaling needs G^ev_B(0); no finite constant for this d, beta");
  CoalesceResult res = run_coalesce_experiment(a.c, green->g_bigworld_even);

  std::size_t censored = 0;
  for (const CoalescingTrajectory& t : res.trajectories) censored += t.censored;

  json summary;
  summary["tool"] = tool_stamp();
  summary["config"] = config_to_json(a.c);
  summary["n"] = res.plan.n;
  summary["t_grid"] = res.plan.t_grid;
  summary["plan"] = json{{"h_min", res.plan.h_min}, {"s_scale", res.plan.s_scale}};
  summary["starts"] = res.starts;
  summary["censored_fraction"] =
      static_cast<double>(censored) / static_cast<double>(res.trajectories.size());
  summary["dkw_eps"] = dkw_epsilon(res.trajectories.size(), 0.05);
  json emp = json::array(), king = json::array(), tv = json::array();
  for (double t : res.plan.t_grid) {
    const std::vector<double> pmf = count_pmf_at(res, t);
    const std::vector<double> reference = kingman_row(res.plan.n, t);
    emp.push_back(pmf);
    king.push_back(reference);
    tv.push_back(total_variation(pmf, reference));
  }
  summary["empirical_pmf"] = std::move(emp);
  summary["kingman_pmf"] = std::move(king);
  summary["tv_distance"] = std::move(tv);

  const std::filesystem::path dir(a.out);
  write_file(dir / "coalesce_trajectories.csv", trajectories_to_csv(a.c, res));
  std::cerr << "wrote " << (dir / "coalesce_trajectories.csv").string() << "\n";
  emit(dir / "coalesce_summary.json", summary.dump(2) + "\n", /*echo=*/true);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"small-world random walk laboratory"};
  app.require_subcommand(1);

  // gen ---------------------------------------------------------------
  struct {
    TorusSpec spec;
    std::uint64_t seed = 1;
    bool forbid_short = false;
    std::string out = default_outdir();
    std::string config_path;
  } gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "sample a small world and emit it as JSON");
  gen_cmd->add_option("--config", gen.config_path, "JSON config file");
  gen_cmd->add_option("--d", gen.spec.d, "torus dimension");
  gen_cmd->add_option("--L", gen.spec.L, "half side");
  gen_cmd->add_option("--m", gen.spec.m, "short-range radius");
  gen_cmd->add_option("--seed", gen.seed, "graph seed");
  gen_cmd->add_flag("--forbid-short", gen.forbid_short,
                    "reject matchings pairing short-range neighbours");
  gen_cmd->add_option("--out", gen.out, "output directory");

  // meet / hit / coalesce ----------------------------------------------
  RunArgs meet_args, hit_args, coalesce_args;
  CLI::App* meet_cmd = app.add_subcommand("meet", "meeting time of two walkers");
  add_run_flags(meet_cmd, meet_args, /*pair=*/true);
  CLI::App* hit_cmd = app.add_subcommand("hit", "hitting time of a target site");
  add_run_flags(hit_cmd, hit_args, /*pair=*/true);
  CLI::App* coalesce_cmd = app.add_subcommand("coalesce", "n-particle coalescing walk");
  add_run_flags(coalesce_cmd, coalesce_args, /*pair=*/false);

  // green ---------------------------------------------------------------
  struct {
    int d = 1;
    double beta = 0.3;
    GreenSolveOptions opts;
    std::string out = default_outdir();
    std::string config_path;
  } green;
  CLI::App* green_cmd =
      app.add_subcommand("green", "big-world Green function via DP and fixed point");
  green_cmd->add_option("--config", green.config_path, "JSON config file");
  green_cmd->add_option("--d", green.d, "dimension (1 or >= 3)");
  green_cmd->add_option("--beta", green.beta, "long-range step probability");
  green_cmd->add_option("--n0", green.opts.dp_horizon, "DP partial-sum horizon");
  green_cmd->add_option("--out", green.out, "output directory");

  // betascan -------------------------------------------------------------
  struct {
    int d = 3;
    std::vector<double> grid;
    std::string out = default_outdir();
    std::string config_path;
  } betascan;
  CLI::App* betascan_cmd = app.add_subcommand(
      "betascan", "sign of G_{Z^d}(0) - G_B(0) across a beta grid, with crossing");
  betascan_cmd->add_option("--config", betascan.config_path, "JSON config file");
  betascan_cmd->add_option("--d", betascan.d, "dimension (>= 3)");
  betascan_cmd->add_option("--betas", betascan.grid, "beta grid")->delimiter(',');
  betascan_cmd->add_option("--out", betascan.out, "output directory");

  // iso -------------------------------------------------------------------
  struct {
    std::string model = "smallworld";
    TorusSpec spec{1, 6, 1};
    double beta = 0.3;
    bool lazy = false;
    int cm_n = 12, cm_r = 3, cm_h = 0;
    int samples = 100;
    double alpha = 0.1;
    std::uint64_t seed = 1;
    std::string out = default_outdir();
    std::string config_path;
  } iso;
  CLI::App* iso_cmd =
      app.add_subcommand("iso", "isoperimetric survey over sampled graphs");
  iso_cmd->add_option("--config", iso.config_path, "JSON config file");
  iso_cmd->add_option("--model", iso.model, "smallworld | configuration");
  iso_cmd->add_option("--d", iso.spec.d, "torus dimension");
  iso_cmd->add_option("--L", iso.spec.L, "half side");
  iso_cmd->add_option("--m", iso.spec.m, "short-range radius");
  iso_cmd->add_option("--beta", iso.beta, "long-range step probability");
  iso_cmd->add_flag("--lazy", iso.lazy, "lazify the kernel");
  iso_cmd->add_option("--cm-n", iso.cm_n, "configuration model: vertices");
  iso_cmd->add_option("--cm-r", iso.cm_r, "configuration model: degree");
  iso_cmd->add_option("--cm-h", iso.cm_h, "configuration model: hub half-edges (0 = none)");
  iso_cmd->add_option("--samples", iso.samples, "graphs to sample");
  iso_cmd->add_option("--alpha", iso.alpha, "threshold for fraction_above");
  iso_cmd->add_option("--seed", iso.seed, "master seed");
  iso_cmd->add_option("--out", iso.out, "output directory");

  // spectral ---------------------------------------------------------------
  struct {
    TorusSpec spec{1, 8, 1};
    double beta = 0.3;
    bool lazy = false;
    std::uint64_t seed = 1;
    int iso_max_n = 24;
    std::string out = default_outdir();
    std::string config_path;
  } spectral;
  CLI::App* spectral_cmd =
      app.add_subcommand("spectral", "gap, Cheeger bound and mixing fit for one graph");
  spectral_cmd->add_option("--config", spectral.config_path, "JSON config file");
  spectral_cmd->add_option("--d", spectral.spec.d, "torus dimension");
  spectral_cmd->add_option("--L", spectral.spec.L, "half side");
  spectral_cmd->add_option("--m", spectral.spec.m, "short-range radius");
  spectral_cmd->add_option("--beta", spectral.beta, "long-range step probability");
  spectral_cmd->add_flag("--lazy", spectral.lazy, "lazify the kernel");
  spectral_cmd->add_option("--seed", spectral.seed, "graph seed");
  spectral_cmd->add_option("--iso-max-n", spectral.iso_max_n,
                           "largest site count for exact iota");
  spectral_cmd->add_option("--out", spectral.out, "output directory");

  // kingman ------------------------------------------------------------------
  struct {
    int n = 4;
    std::vector<double> t{1.0};
    std::string out = default_outdir();
    std::string config_path;
  } kingman;
  CLI::App* kingman_cmd =
      app.add_subcommand("kingman", "block-count law of the Kingman coalescent");
  kingman_cmd->add_option("--config", kingman.config_path, "JSON config file");
  kingman_cmd->add_option("--n", kingman.n, "initial block count");
  kingman_cmd->add_option("--t", kingman.t, "times")->delimiter(',');
  kingman_cmd->add_option("--out", kingman.out, "output directory");

  // Config files seed defaults; flags parsed afterwards override them.
  try {
    json cfg;
    for (int i = 1; i < argc; ++i) {
      const std::string arg = argv[i];
      if (arg == "--config" && i + 1 < argc) cfg = load_config_file(argv[i + 1]);
      else if (arg.rfind("--config=", 0) == 0) cfg = load_config_file(arg.substr(9));
    }
    if (!cfg.empty()) {
      apply_config(cfg, meet_args);
      apply_config(cfg, hit_args);
      apply_config(cfg, coalesce_args);
      maybe(cfg, "d", gen.spec.d);
      maybe(cfg, "L", gen.spec.L);
      maybe(cfg, "m", gen.spec.m);
      maybe(cfg, "seed", gen.seed);
      maybe(cfg, "forbid_short_pairs", gen.forbid_short);
      maybe(cfg, "d", green.d);
      maybe(cfg, "beta", green.beta);
      maybe(cfg, "n0", green.opts.dp_horizon);
      maybe(cfg, "d", betascan.d);
      maybe(cfg, "betas", betascan.grid);
      maybe(cfg, "model", iso.model);
      maybe(cfg, "d", iso.spec.d);
      maybe(cfg, "L", iso.spec.L);
      maybe(cfg, "m", iso.spec.m);
      maybe(cfg, "beta", iso.beta);
      maybe(cfg, "lazy", iso.lazy);
      maybe(cfg, "samples", iso.samples);
      maybe(cfg, "alpha", iso.alpha);
      maybe(cfg, "seed", iso.seed);
      maybe(cfg, "d", spectral.spec.d);
      maybe(cfg, "L", spectral.spec.L);
      maybe(cfg, "m", spectral.spec.m);
      maybe(cfg, "beta", spectral.beta);
      maybe(cfg, "lazy", spectral.lazy);
      maybe(cfg, "seed", spectral.seed);
      maybe(cfg, "n", kingman.n);
      maybe(cfg, "t", kingman.t);
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }

    if (app.got_subcommand(gen_cmd)) {
      gen.spec.validate();
      SmallWorldGraph g = sample_small_world(gen.spec, gen.seed, gen.forbid_short);
      json out;
      out["tool"] = tool_stamp();
      out["config"] = json{{"subcommand", "gen"},
                           {"d", gen.spec.d},
                           {"L", gen.spec.L},
                           {"m", gen.spec.m},
                           {"seed", gen.seed},
                           {"forbid_short_pairs", gen.forbid_short}};
      out["sites"] = gen.spec.site_count();
      out["degree"] = gen.spec.degree();
      out["matching"] = g.matching;
      emit(std::filesystem::path(gen.out) / "graph.json", out.dump(2) + "\n", true);
      return 0;
    }
    if (app.got_subcommand(meet_cmd)) return cmd_pair(meet_args, "meet");
    if (app.got_subcommand(hit_cmd)) return cmd_pair(hit_args, "hit");
    if (app.got_subcommand(coalesce_cmd)) return cmd_coalesce(coalesce_args);

    if (app.got_subcommand(green_cmd)) {
      GreenReport rep = solve_bigworld_green(green.d, green.beta, green.opts);
      json out = report_to_json(rep);
      out["tool"] = tool_stamp();
      out["config"] =
          json{{"subcommand", "green"}, {"d", green.d}, {"beta", green.beta},
               {"n0", green.opts.dp_horizon}};
      emit(std::filesystem::path(green.out) / "green_report.json", out.dump(2) + "\n", true);
      return 0;
    }

    if (app.got_subcommand(betascan_cmd)) {
      if (betascan.grid.empty())
        for (int i = 1; i <= 19; ++i) betascan.grid.push_back(0.05 * i);
      BetaScanResult res = beta_comparison_scan(betascan.d, betascan.grid);
      const json cfg_echo{{"subcommand", "betascan"}, {"d", betascan.d},
                          {"betas", betascan.grid}};
      emit(std::filesystem::path(betascan.out) / "betascan.csv",
           comment_line(cfg_echo) + res.to_csv(), true);
      return 0;
    }

    if (app.got_subcommand(iso_cmd)) {
      IsoSurvey survey;
      json cfg_echo{{"subcommand", "iso"},    {"model", iso.model},
                    {"samples", iso.samples}, {"alpha", iso.alpha},
                    {"seed", iso.seed}};
      if (iso.model == "smallworld") {
        WalkKernel kernel = WalkKernel::simple(iso.spec, iso.beta);
        if (iso.lazy) kernel = WalkKernel::lazified(kernel);
        survey = iso_survey(iso.spec, kernel, iso.samples, iso.alpha, iso.seed);
        cfg_echo["d"] = iso.spec.d;
        cfg_echo["L"] = iso.spec.L;
        cfg_echo["m"] = iso.spec.m;
        cfg_echo["beta"] = iso.beta;
        cfg_echo["lazy"] = iso.lazy;
      } else if (iso.model == "configuration") {
        survey = iso_survey_configuration(iso.cm_n, iso.cm_r, iso.cm_h, iso.samples,
                                          iso.alpha, iso.seed);
        cfg_echo["cm_n"] = iso.cm_n;
        cfg_echo["cm_r"] = iso.cm_r;
        cfg_echo["cm_h"] = iso.cm_h;
      } else {
        throw InvalidArgument("--model must be smallworld or configuration");
      }
      emit(std::filesystem::path(iso.out) / "iso_survey.csv",
           comment_line(cfg_echo) + survey.to_csv(), true);
      return 0;
    }

    if (app.got_subcommand(spectral_cmd)) {
      spectral.spec.validate();
      SmallWorldGraph g = sample_small_world(spectral.spec, spectral.seed);
      WalkKernel kernel = WalkKernel::simple(spectral.spec, spectral.beta);
      if (spectral.lazy) kernel = WalkKernel::lazified(kernel);
      SpectralReport rep = spectral_report(g, kernel, spectral.iso_max_n);
      json out = report_to_json(rep);
      out["tool"] = tool_stamp();
      out["config"] = json{{"subcommand", "spectral"},
                           {"d", spectral.spec.d},
                           {"L", spectral.spec.L},
                           {"m", spectral.spec.m},
                           {"beta", spectral.beta},
                           {"lazy", spectral.lazy},
                           {"seed", spectral.seed},
                           {"iso_max_n", spectral.iso_max_n}};
      emit(std::filesystem::path(spectral.out) / "spectral_report.json",
           out.dump(2) + "\n", true);
      return 0;
    }

    if (app.got_subcommand(kingman_cmd)) {
      const json cfg_echo{{"subcommand", "kingman"}, {"n", kingman.n}, {"t", kingman.t}};
      std::string csv = comment_line(cfg_echo);
      csv += "t,k,pmf\n";
      for (double t : kingman.t) {
        const std::vector<double> row = kingman_row(kingman.n, t);
        for (int k = 1; k <= kingman.n; ++k) {
          csv += format_double(t);
          csv += ',';
          csv += std::to_string(k);
          csv += ',';
          csv += format_double(row[static_cast<std::size_t>(k - 1)]);
          csv += '\n';
        }
      }
      emit(std::filesystem::path(kingman.out) / "kingman_pmf.csv", csv, true);
      return 0;
    }

    throw InvalidArgument("no subcommand given");
  } catch (const Error& e) {
    std::cerr << json{{"kind", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"kind", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
