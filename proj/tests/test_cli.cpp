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
// End-to-end checks of the swlab binary: artifact layout, numerical
// content, reproducibility, and error reporting. Invoked as
//   test_cli <path-to-swlab> <scratch-dir>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

int g_failures = 0;
std::string g_bin;
std::filesystem::path g_scratch;

#define CHECK(cond)                                                          \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond);   \
      ++g_failures;                                                          \
    }                                                                        \
  } while (0)

// Runs the tool, capturing stdout/stderr under the scratch dir; returns the
// exit code (or a negative value if the process did not exit normally).
int run_tool(const std::string& args, const std::string& log_name) {
  const std::string out = (g_scratch / (log_name + ".out")).string();
  const std::string err = (g_scratch / (log_name + ".err")).string();
  const std::string cmd = "\"" + g_bin + "\" " + args + " >" + out + " 2>" + err;
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "FAIL cannot read %s\n", path.string().c_str());
    ++g_failures;
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json jload(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  if (text.empty()) return json();
  return json::parse(text, nullptr, /*allow_exceptions=*/false);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string out_dir(const std::string& name) { return (g_scratch / name).string(); }

void test_green_report() {
  const int rc = run_tool("green --d 1 --beta 0.5 --out " + out_dir("g1"), "g1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "g1" / "green_report.json");
  CHECK(!j.is_discarded());
  CHECK(j.contains("G_bigworld"));
  CHECK(std::abs(j["G_bigworld"].get<double>() - 2.1711646096067945) < 1e-6);
  CHECK(std::abs(j["G_bigworld_even"].get<double>() -
                 j["G_bigworld"].get<double>() / 2.0) < 1e-12);
  CHECK(j["G_torus_limit"].is_null());
  CHECK(j["tool"]["name"] == "swlab");
  CHECK(j["config"]["n0"] == 40);
  // The report is echoed to stdout byte for byte.
  CHECK(slurp(g_scratch / "g1.out") == slurp(g_scratch / "g1" / "green_report.json"));
}

void test_green_config_file() {
  const std::filesystem::path cfg_path = g_scratch / "green_cfg.json";
  std::ofstream(cfg_path) << R"({"d":1,"beta":0.5,"n0":16})";

  int rc = run_tool("green --config " + cfg_path.string() + " --out " + out_dir("g2"), "g2");
  CHECK(rc == 0);
  const json j2 = jload(g_scratch / "g2" / "green_report.json");
  CHECK(j2["config"]["n0"] == 16);
  CHECK(std::abs(j2["dp_partial"].get<double>() - 2.0197448) < 1e-6);

  // Flags override config-file values.
  rc = run_tool(
      "green --config " + cfg_path.string() + " --beta 0.3 --out " + out_dir("g3"), "g3");
  CHECK(rc == 0);
  const json j3 = jload(g_scratch / "g3" / "green_report.json");
  CHECK(j3["config"]["beta"] == 0.3);
  CHECK(std::abs(j3["G_bigworld"].get<double>() - 2.0074730670615436) < 1e-6);
}

void test_green_divergent_error() {
  const int rc = run_tool("green --d 2 --out " + out_dir("g4"), "g4");
  CHECK(rc == 1);
  const std::string err = slurp(g_scratch / "g4.err");
  CHECK(err.find("\"kind\":\"divergent\"") != std::string::npos);
}

void test_kingman_csv() {
  const int rc = run_tool("kingman --n 2 --t 1 --out " + out_dir("k1"), "k1");
  CHECK(rc == 0);
  const std::string csv = slurp(g_scratch / "k1" / "kingman_pmf.csv");
  CHECK(csv.rfind("# swlab 0.1.0 config=", 0) == 0);
  CHECK(csv.find("t,k,pmf\n") != std::string::npos);
  // Two blocks merge at rate 1: P(still 2 at t=1) = e^{-1}.
  double p1 = -1.0, p2 = -1.0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("1,1,", 0) == 0) p1 = std::stod(line.substr(4));
    if (line.rfind("1,2,", 0) == 0) p2 = std::stod(line.substr(4));
  }
  CHECK(std::abs(p2 - std::exp(-1.0)) < 1e-12);
  CHECK(std::abs(p1 - (1.0 - std::exp(-1.0))) < 1e-12);
}

void test_meet_small_cycle() {
  const int rc = run_tool(
      "meet --d 1 --L 2 --beta 0 --start antipodal --replicas 1500 --seed 5 --threads 2 "
      "--out " +
          out_dir("m1"),
      "m1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "m1" / "meet_summary.json");
  CHECK(j["N"] == 1500);
  CHECK(j["censored_fraction"].get<double>() == 0.0);
  // Antipodal meeting on the 4-cycle has mean 2, i.e. 0.5 after rescaling.
  CHECK(std::abs(j["mean_rescaled"].get<double>() - 0.5) < 0.06);
  // beta = 0 admits no finite big-world constant, so no law is attached.
  CHECK(j["law"].is_null());
  CHECK(j["ks"].is_null());
  CHECK(j["pass"].is_null());
  CHECK(j["config"]["start_mode"] == "antipodal");
}

void test_meet_reproducible() {
  const std::string flags = "meet --d 1 --L 4 --beta 0.3 --replicas 64 --seed 42 --out ";
  CHECK(run_tool(flags + out_dir("r1"), "r1") == 0);
  CHECK(run_tool(flags + out_dir("r2"), "r2") == 0);
  const std::string csv1 = slurp(g_scratch / "r1" / "meet_samples.csv");
  const std::string csv2 = slurp(g_scratch / "r2" / "meet_samples.csv");
  CHECK(!csv1.empty());
  CHECK(csv1 == csv2);
  CHECK(slurp(g_scratch / "r1" / "meet_summary.json") ==
        slurp(g_scratch / "r2" / "meet_summary.json"));
}

void test_hit_law_attached() {
  const int rc = run_tool(
      "hit --d 1 --L 8 --beta 0.3 --replicas 400 --seed 7 --out " + out_dir("h1"), "h1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "h1" / "hit_summary.json");
  CHECK(j["law"]["name"] == "hitting_distant");
  CHECK(std::abs(j["law"]["theta"].get<double>() - 2.0074730670615436) < 1e-6);
  CHECK(j["law"]["atom"].get<double>() == 0.0);
  CHECK(j["green"]["G_bigworld"].get<double>() > 2.0);
  CHECK(j["ks"].is_number());
  CHECK(j["pass"].is_boolean());
}

void test_coalesce_summary() {
  const int rc = run_tool(
      "coalesce --d 1 --L 16 --beta 0.3 --n 3 --replicas 200 --t-grid 0.5,2 --seed 9 "
      "--out " +
          out_dir("c1"),
      "c1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "c1" / "coalesce_summary.json");
  CHECK(j["n"] == 3);
  CHECK(j["starts"] == json::array({0, 10, 21}));
  CHECK(std::abs(j["plan"]["s_scale"].get<double>() - 32.0 * 1.0037365335307718) < 1e-3);
  CHECK(j["t_grid"] == json::array({0.5, 2.0}));
  CHECK(j["empirical_pmf"].size() == 2);
  CHECK(j["kingman_pmf"].size() == 2);
  CHECK(j["tv_distance"].size() == 2);
  for (const auto& row : j["empirical_pmf"]) {
    CHECK(row.size() == 3);
    double sum = 0.0;
    for (const auto& p : row) sum += p.get<double>();
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
  for (const auto& tv : j["tv_distance"]) {
    CHECK(tv.get<double>() >= 0.0);
    CHECK(tv.get<double>() <= 1.0);
  }
  CHECK(j["censored_fraction"].get<double>() < 0.05);
  const std::string traj = slurp(g_scratch / "c1" / "coalesce_trajectories.csv");
  CHECK(traj.find("replica,event_time,count\n") != std::string::npos);
}

void test_gen_graph() {
  const int rc = run_tool("gen --d 1 --L 4 --seed 3 --out " + out_dir("gen1"), "gen1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "gen1" / "graph.json");
  CHECK(j["sites"] == 8);
  CHECK(j["degree"] == 3);
  const auto matching = j["matching"].get<std::vector<std::size_t>>();
  CHECK(matching.size() == 8);
  for (std::size_t i = 0; i < matching.size(); ++i) {
    CHECK(matching[i] != i);
    CHECK(matching[i] < 8);
    CHECK(matching[matching[i]] == i);
  }
}

void test_iso_survey_csv() {
  const int rc = run_tool(
      "iso --model smallworld --d 1 --L 6 --beta 0.3 --lazy --samples 40 --alpha 0.2 "
      "--seed 13 --out " +
          out_dir("i1"),
      "i1");
  CHECK(rc == 0);
  const std::string csv = slurp(g_scratch / "i1" / "iso_survey.csv");
  CHECK(csv.rfind("# swlab 0.1.0 config=", 0) == 0);
  CHECK(csv.find(",proxy=0,fraction_above=") != std::string::npos);
  CHECK(csv.find("sample,iota,lambda1,cheeger_lower\n") != std::string::npos);
  CHECK(count_lines(csv) == 43);  // tool comment + survey comment + header + 40 rows
}

void test_spectral_report() {
  const int rc = run_tool(
      "spectral --d 1 --L 8 --beta 0.3 --lazy --seed 3 --out " + out_dir("s1"), "s1");
  CHECK(rc == 0);
  const json j = jload(g_scratch / "s1" / "spectral_report.json");
  CHECK(j["sites"] == 16);
  CHECK(j["lazy"].get<bool>());
  CHECK(j["iota_exact"].get<bool>());
  CHECK(j["method"] == "dense+eigen");
  CHECK(j["r2"].get<double>() >= 0.99);
  CHECK(j["cheeger_lower"].get<double>() <= 1.0 - j["lambda1"].get<double>() + 1e-12);
  CHECK(j["config"]["seed"] == 3);
}

void test_betascan_csv() {
  const int rc = run_tool("betascan --d 3 --betas 0.05,0.5,0.95 --out " + out_dir("b1"), "b1");
  CHECK(rc == 0);
  const std::string csv = slurp(g_scratch / "b1" / "betascan.csv");
  CHECK(csv.rfind("# swlab 0.1.0 config=", 0) == 0);
  CHECK(csv.find("beta") != std::string::npos);
  CHECK(count_lines(csv) >= 5);
}

void test_bad_invocations() {
  CHECK(run_tool("", "bad1") != 0);  // a subcommand is required
  const int rc = run_tool("meet --d 1 --L 4 --beta 1.5 --out " + out_dir("bad2"), "bad2");
  CHECK(rc == 1);
  const std::string err = slurp(g_scratch / "bad2.err");
  CHECK(err.find("\"kind\":\"invalid_argument\"") != std::string::npos);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <swlab-binary> <scratch-dir>\n", argv[0]);
    return 2;
  }
  g_bin = argv[1];
  g_scratch = argv[2];
  std::error_code ec;
  std::filesystem::create_directories(g_scratch, ec);
  if (ec) {
    std::fprintf(stderr, "cannot create scratch dir %s\n", g_scratch.string().c_str());
    return 2;
  }

  test_green_report();
  test_green_config_file();
  test_green_divergent_error();
  test_kingman_csv();
  test_meet_small_cycle();
  test_meet_reproducible();
  test_hit_law_attached();
  test_coalesce_summary();
  test_gen_graph();
  test_iso_survey_csv();
  test_spectral_report();
  test_betascan_csv();
  test_bad_invocations();

  if (g_failures == 0) {
    std::printf("test_cli: all checks passed\n");
    return 0;
  }
  std::printf("test_cli: %d check(s) failed\n", g_failures);
  return 1;
}
