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
#ifndef PNOC_CONFIG_HPP_
#define PNOC_CONFIG_HPP_

#include <stdexcept>
#include <string>

#include "pnoc/types.hpp"

namespace pnoc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NetworkKind : u8 { kXbar, kHMesh, kLMesh };
enum class MemoryKind : u8 { kOcm, kEcm };
enum class WorkloadKind : u8 {
  kUniform,
  kHotspot,
  kTornado,
  kTranspose,
  kBursty,
  kBcast,
  kTrace,
};
enum class BarrierMode : u8 { kIdeal, kBus };

const char* to_string(NetworkKind k);
const char* to_string(MemoryKind k);
const char* to_string(WorkloadKind k);
NetworkKind parse_network(const std::string& s);
MemoryKind parse_memory(const std::string& s);

struct SimConfig {
  NetworkKind network = NetworkKind::kXbar;
  MemoryKind memory = MemoryKind::kOcm;
  WorkloadKind workload = WorkloadKind::kUniform;
  std::string trace_path;      // set when workload == kTrace
  u64 request_target = 1'000'000;  // synthetic request count; 0 = full trace
  u64 seed = 1;

  // Cluster machinery.
  u32 mshr_capacity = 64;
  u32 hub_queue_depth = 16;

  // Electrical mesh.
  u32 mesh_buffer_flits = 8;
  u32 nic_queue_depth = 16;

  // Memory controller.
  u32 mem_queue_depth = 64;

  // Workload knobs.
  ClusterId hotspot_target = 0;
  u64 burst_epoch_cycles = 12800;
  u32 burst_size = 2;
  BarrierMode barrier_mode = BarrierMode::kIdeal;

  std::string config_name() const;   // e.g. "xbar/ocm"
  std::string workload_name() const; // e.g. "uniform" or "trace:foo"

  // Applies one key=value pair; throws ConfigError on unknown keys or bad
  // values. Shared by the config-file parser, the sweep parser and the CLI.
  void apply(const std::string& key, const std::string& value);

  void validate() const;
};

// Plain-text config file: one key=value per line, '#' comments.
SimConfig load_config_file(const std::string& path, SimConfig base = {});

}  // namespace pnoc

#endif  // PNOC_CONFIG_HPP_
