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
#include "pnoc/sweep.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "pnoc/system.hpp"

namespace pnoc {

RunResult run_one(const SimConfig& cfg) {
  System sys(cfg);
  return sys.run();
}

std::vector<SimConfig> load_sweep_file(const std::string& path, const SimConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep file: " + path);
  std::vector<SimConfig> out;
  std::string line;
  u32 lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    SimConfig cfg = base;
    bool any = false;
    while (ss >> tok) {
      size_t eq = tok.find('=');
      if (eq == std::string::npos) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
      }
      try {
        cfg.apply(tok.substr(0, eq), tok.substr(eq + 1));
      } catch (const ConfigError& err) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": " + err.what());
      }
      any = true;
    }
    if (any) {
      cfg.validate();
      out.push_back(cfg);
    }
  }
  return out;
}

std::vector<RunResult> run_many(const std::vector<SimConfig>& cfgs, u32 jobs) {
  std::vector<RunResult> results(cfgs.size());
  if (jobs <= 1 || cfgs.size() <= 1) {
    for (size_t i = 0; i < cfgs.size(); ++i) results[i] = run_one(cfgs[i]);
    return results;
  }
  std::atomic<size_t> next{0};
  std::vector<std::string> errors(cfgs.size());
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cfgs.size()) return;
      try {
        results[i] = run_one(cfgs[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  u32 n = std::min<u32>(jobs, static_cast<u32>(cfgs.size()));
  pool.reserve(n);
  for (u32 i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (size_t i = 0; i < cfgs.size(); ++i) {
    if (!errors[i].empty()) throw std::runtime_error(errors[i]);
  }
  return results;
}

std::vector<std::pair<NetworkKind, MemoryKind>> standard_configs() {
  return {{NetworkKind::kXbar, MemoryKind::kOcm},
          {NetworkKind::kHMesh, MemoryKind::kOcm},
          {NetworkKind::kLMesh, MemoryKind::kOcm},
          {NetworkKind::kHMesh, MemoryKind::kEcm},
          {NetworkKind::kLMesh, MemoryKind::kEcm}};
}

std::string ComparisonTable::csv() const {
  std::string out = csv_header(true);
  for (size_t i = 0; i < rows.size(); ++i) {
    out += csv_row(rows[i], speedups[i]);
  }
  char buf[128];
  for (size_t c = 0; c < config_names.size(); ++c) {
    snprintf(buf, sizeof(buf), "# geomean %s %.9g\n", config_names[c].c_str(),
             geomeans[c]);
    out += buf;
  }
  return out;
}

ComparisonTable run_comparison(const SimConfig& base,
                               const std::vector<std::string>& workloads, u32 jobs) {
  if (workloads.empty()) throw ConfigError("no workloads to compare");
  auto rigs = standard_configs();
  std::vector<SimConfig> cfgs;
  for (const auto& [net, mem] : rigs) {
    for (const std::string& w : workloads) {
      SimConfig cfg = base;
      cfg.network = net;
      cfg.memory = mem;
      cfg.apply("workload", w);
      cfg.validate();
      cfgs.push_back(cfg);
    }
  }
  std::vector<RunResult> results = run_many(cfgs, jobs);

  ComparisonTable table;
  table.rows = results;
  table.speedups.resize(results.size());
  size_t nw = workloads.size();
  size_t baseline_rig = rigs.size() - 1;  // lmesh/ecm rows come last
  for (size_t r = 0; r < rigs.size(); ++r) {
    std::vector<double> per_workload;
    for (size_t w = 0; w < nw; ++w) {
      double mine = static_cast<double>(results[r * nw + w].runtime_cycles);
      double ref = static_cast<double>(results[baseline_rig * nw + w].runtime_cycles);
      double speedup = mine > 0.0 ? ref / mine : 0.0;
      table.speedups[r * nw + w] = speedup;
      per_workload.push_back(speedup);
    }
    table.config_names.push_back(results[r * nw].config);
    table.geomeans.push_back(geomean(per_workload));
  }
  return table;
}

}  // namespace pnoc
