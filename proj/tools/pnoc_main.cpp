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
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pnoc/sweep.hpp"
#include "pnoc/system.hpp"

namespace {

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pnoc::ConfigError("cannot write: " + path);
  out << text;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pnoc: cycle-level many-core interconnect and memory simulator"};
  app.get_formatter()->column_width(30);

  std::string network = "xbar";
  std::string memory = "ocm";
  std::string workload = "uniform";
  std::string config_file;
  std::string sweep_file;
  std::string multi_workload;
  std::string out_path;
  std::string hist_path;
  unsigned long long requests = 0;
  unsigned long long seed = 0;
  unsigned jobs = 1;
  bool inventory = false;

  auto* net_opt = app.add_option("--network", network, "Interconnect: xbar|hmesh|lmesh");
  auto* mem_opt = app.add_option("--memory", memory, "Memory channels: ocm|ecm");
  auto* wl_opt = app.add_option(
      "--workload", workload,
      "uniform|hotspot|tornado|transpose|bursty|bcast|trace:<file>");
  auto* req_opt = app.add_option("--requests", requests, "Request quota for synthetic workloads");
  auto* seed_opt = app.add_option("--seed", seed, "Base RNG seed");
  app.add_option("--config", config_file, "key=value file; explicit flags win");
  app.add_option("--sweep", sweep_file, "Run one config per line of overrides");
  app.add_option("--multi-workload", multi_workload,
                 "Comma-separated workloads; runs the standard rig comparison");
  app.add_option("--out", out_path, "CSV output path (default stdout)");
  app.add_option("--hist", hist_path, "Latency histogram CSV path (single runs)");
  app.add_option("--jobs", jobs, "Parallel simulations for sweep/comparison modes");
  app.add_flag("--inventory", inventory, "Print the photonic component inventory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (inventory) {
      std::cout << pnoc::inventory_text();
      return 0;
    }

    pnoc::SimConfig cfg;
    if (!config_file.empty()) cfg = pnoc::load_config_file(config_file, cfg);
    if (net_opt->count() > 0 || config_file.empty()) cfg.apply("network", network);
    if (mem_opt->count() > 0 || config_file.empty()) cfg.apply("memory", memory);
    if (wl_opt->count() > 0 || config_file.empty()) cfg.apply("workload", workload);
    if (req_opt->count() > 0) cfg.request_target = requests;
    if (seed_opt->count() > 0) cfg.seed = seed;

    if (!sweep_file.empty()) {
      auto cfgs = pnoc::load_sweep_file(sweep_file, cfg);
      auto results = pnoc::run_many(cfgs, jobs);
      std::string csv = pnoc::csv_header();
      for (const auto& r : results) csv += pnoc::csv_row(r);
      write_text(out_path, csv);
      return 0;
    }

    if (!multi_workload.empty()) {
      auto table = pnoc::run_comparison(cfg, split_commas(multi_workload), jobs);
      write_text(out_path, table.csv());
      return 0;
    }

    cfg.validate();
    pnoc::RunResult r = pnoc::run_one(cfg);
    write_text(out_path, pnoc::csv_header() + pnoc::csv_row(r));
    if (!hist_path.empty()) {
      write_text(hist_path, pnoc::histogram_csv(r.stats.histogram));
    }
    return 0;
  } catch (const pnoc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const pnoc::DeadlockError& e) {
    std::cerr << "deadlock: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
