/*
 * Copyright 2026 The pnoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the 'License');
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "pnoc/sweep.hpp"
#include "pnoc/system.hpp"

using namespace pnoc;

TEST_SUITE_BEGIN("cli");

namespace {

// Runs the installed binary with stderr folded into stdout.
std::pair<int, std::string> run_cli(const std::string& args) {
  std::string cmd = std::string(PNOC_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, n);
  int rc = pclose(p);
  return {WEXITSTATUS(rc), out};
}

std::string tmp_path(const char* name) {
  return "/tmp/pnoc_cli_" + std::to_string(getpid()) + "_" + name;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config keys round-trip through apply") {
  SimConfig cfg;
  cfg.apply("network", "lmesh");
  cfg.apply("memory", "ecm");
  cfg.apply("requests", "4096");
  cfg.apply("seed", "7");
  cfg.apply("barrier_mode", "bus");
  CHECK(cfg.network == NetworkKind::kLMesh);
  CHECK(cfg.memory == MemoryKind::kEcm);
  CHECK(cfg.request_target == 4096);
  CHECK(cfg.seed == 7);
  CHECK(cfg.barrier_mode == BarrierMode::kBus);
  CHECK(cfg.config_name() == "lmesh/ecm");

  cfg.apply("workload", "trace:/tmp/foo.trace");
  CHECK(cfg.workload == WorkloadKind::kTrace);
  CHECK(cfg.trace_path == "/tmp/foo.trace");
  CHECK(cfg.workload_name() == "trace:/tmp/foo.trace");

  CHECK_THROWS_AS(cfg.apply("network", "warp"), ConfigError);
  CHECK_THROWS_AS(cfg.apply("no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(cfg.apply("requests", "many"), ConfigError);
  CHECK_THROWS_AS(cfg.apply("workload", "trace:"), ConfigError);

  SimConfig bad;
  bad.workload = WorkloadKind::kTrace;
  bad.trace_path.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("config files apply in order and report bad lines") {
  std::string path = tmp_path("order.cfg");
  write_file(path,
             "# comment only\n"
             "network = hmesh\n"
             "requests = 123   # trailing comment\n"
             "network = lmesh\n");
  SimConfig cfg = load_config_file(path, SimConfig{});
  CHECK(cfg.network == NetworkKind::kLMesh);
  CHECK(cfg.request_target == 123);

  std::string bad = tmp_path("bad.cfg");
  write_file(bad, "network = hmesh\nthis line has no equals\n");
  try {
    load_config_file(bad, SimConfig{});
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  std::remove(path.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("a single run prints exactly what the library computes") {
  SimConfig cfg;
  cfg.network = NetworkKind::kXbar;
  cfg.memory = MemoryKind::kOcm;
  cfg.workload = WorkloadKind::kUniform;
  cfg.request_target = 2000;
  cfg.seed = 3;
  std::string expected = csv_header() + csv_row(run_one(cfg));

  auto [rc, out] = run_cli(
      "--network xbar --memory ocm --workload uniform --requests 2000 --seed 3");
  CHECK(rc == 0);
  CHECK(out == expected);
}

TEST_CASE("the inventory flag prints the static component counts") {
  auto [rc, out] = run_cli("--inventory");
  CHECK(rc == 0);
  CHECK(out.find("waveguides") != std::string::npos);
  CHECK(out.find("~1056 K") != std::string::npos);
  CHECK(out.find("388") != std::string::npos);
}

TEST_CASE("bad values and unknown flags fail loudly") {
  auto [rc1, out1] = run_cli("--network warp --requests 10");
  CHECK(rc1 == 1);
  CHECK(out1.find("config error") != std::string::npos);

  auto [rc2, out2] = run_cli("--frobnicate");
  CHECK(rc2 != 0);

  // A synthetic workload with a zero quota is a config error, not a hang.
  auto [rc3, out3] = run_cli("--workload uniform --requests 0");
  CHECK(rc3 == 1);
}

TEST_CASE("explicit flags override the config file") {
  std::string path = tmp_path("base.cfg");
  write_file(path,
             "network = hmesh\n"
             "workload = hotspot\n"
             "requests = 400\n"
             "seed = 6\n");
  auto [rc, out] = run_cli("--config " + path + " --workload uniform");
  CHECK(rc == 0);
  CHECK(out.find("hmesh/ocm,uniform,") != std::string::npos);
  CHECK(out.find("hotspot") == std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("histogram output accounts for every completion") {
  std::string hist = tmp_path("hist.csv");
  auto [rc, out] = run_cli("--requests 500 --seed 2 --hist " + hist);
  CHECK(rc == 0);

  std::istringstream in(read_file(hist));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "bucket_ns,count");
  u64 total = 0;
  u32 rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    total += std::stoull(line.substr(line.find(',') + 1));
  }
  CHECK(rows == 513);  // 512 buckets plus overflow
  CHECK(total == 500);
  std::remove(hist.c_str());
}

TEST_CASE("sweep files run line by line in order") {
  std::string sweep = tmp_path("sweep.txt");
  std::string out_path = tmp_path("sweep_out.csv");
  write_file(sweep,
             "# two small rigs\n"
             "workload=hotspot requests=300\n"
             "workload=uniform requests=300 seed=5\n");
  auto [rc, out] = run_cli("--sweep " + sweep + " --jobs 2 --out " + out_path);
  CHECK(rc == 0);

  std::istringstream in(read_file(out_path));
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "config,workload,runtime_cycles,bandwidth_GBps,avg_latency_ns,power_W,mem_power_W");
  REQUIRE(std::getline(in, line));
  CHECK(line.find(",hotspot,") != std::string::npos);
  REQUIRE(std::getline(in, line));
  CHECK(line.find(",uniform,") != std::string::npos);
  CHECK(!std::getline(in, line));
  std::remove(sweep.c_str());
  std::remove(out_path.c_str());
}

TEST_CASE("the comparison mode reports all five rigs with speedups") {
  std::string out_path = tmp_path("cmp.csv");
  auto [rc, out] =
      run_cli("--multi-workload uniform --requests 600 --jobs 4 --out " + out_path);
  CHECK(rc == 0);

  std::string csv = read_file(out_path);
  CHECK(csv.find("speedup") != std::string::npos);
  for (const char* rig : {"xbar/ocm", "hmesh/ocm", "lmesh/ocm", "hmesh/ecm", "lmesh/ecm"}) {
    CAPTURE(rig);
    CHECK(csv.find(rig) != std::string::npos);
  }
  std::remove(out_path.c_str());
}

TEST_SUITE_END();
