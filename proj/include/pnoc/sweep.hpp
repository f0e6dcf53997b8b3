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
#ifndef PNOC_SWEEP_HPP_
#define PNOC_SWEEP_HPP_

#include <string>
#include <vector>

#include "pnoc/metrics.hpp"

namespace pnoc {

RunResult run_one(const SimConfig& cfg);

// One run per non-comment line; each line is whitespace-separated key=value
// overrides applied on top of the base config.
std::vector<SimConfig> load_sweep_file(const std::string& path, const SimConfig& base);

// Runs configs (up to `jobs` in flight at once) and returns results in input
// order, so output is identical no matter the parallelism.
std::vector<RunResult> run_many(const std::vector<SimConfig>& cfgs, u32 jobs);

// The standard comparison set: one photonic and four electrical/hybrid rigs.
std::vector<std::pair<NetworkKind, MemoryKind>> standard_configs();

struct ComparisonTable {
  std::vector<RunResult> rows;     // config-major, workload-minor
  std::vector<double> speedups;    // parallel to rows, vs the all-electrical rig
  std::vector<std::string> config_names;
  std::vector<double> geomeans;    // per config, across workloads
  std::string csv() const;
};

// Runs every standard config against every workload named in `workloads`
// (base supplies everything else). Speedups are runtime ratios against the
// lmesh/ecm rows for the same workload.
ComparisonTable run_comparison(const SimConfig& base,
                               const std::vector<std::string>& workloads, u32 jobs);

}  // namespace pnoc

#endif  // PNOC_SWEEP_HPP_
