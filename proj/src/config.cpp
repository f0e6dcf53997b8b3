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
#include "pnoc/config.hpp"

#include <fstream>
#include <sstream>

namespace pnoc {

const char* to_string(NetworkKind k) {
  switch (k) {
    case NetworkKind::kXbar: return "xbar";
    case NetworkKind::kHMesh: return "hmesh";
    case NetworkKind::kLMesh: return "lmesh";
  }
  return "?";
}

const char* to_string(MemoryKind k) {
  return k == MemoryKind::kOcm ? "ocm" : "ecm";
}

const char* to_string(WorkloadKind k) {
  switch (k) {
    case WorkloadKind::kUniform: return "uniform";
    case WorkloadKind::kHotspot: return "hotspot";
    case WorkloadKind::kTornado: return "tornado";
    case WorkloadKind::kTranspose: return "transpose";
    case WorkloadKind::kBursty: return "bursty";
    case WorkloadKind::kBcast: return "bcast";
    case WorkloadKind::kTrace: return "trace";
  }
  return "?";
}

NetworkKind parse_network(const std::string& s) {
  if (s == "xbar") return NetworkKind::kXbar;
  if (s == "hmesh") return NetworkKind::kHMesh;
  if (s == "lmesh") return NetworkKind::kLMesh;
  throw ConfigError("unknown network '" + s + "' (expected xbar|hmesh|lmesh)");
}

MemoryKind parse_memory(const std::string& s) {
  if (s == "ocm") return MemoryKind::kOcm;
  if (s == "ecm") return MemoryKind::kEcm;
  throw ConfigError("unknown memory '" + s + "' (expected ocm|ecm)");
}

namespace {

std::pair<WorkloadKind, std::string> parse_workload(const std::string& s) {
  if (s == "uniform") return {WorkloadKind::kUniform, ""};
  if (s == "hotspot") return {WorkloadKind::kHotspot, ""};
  if (s == "tornado") return {WorkloadKind::kTornado, ""};
  if (s == "transpose") return {WorkloadKind::kTranspose, ""};
  if (s == "bursty") return {WorkloadKind::kBursty, ""};
  if (s == "bcast") return {WorkloadKind::kBcast, ""};
  if (s.rfind("trace:", 0) == 0) {
    std::string path = s.substr(6);
    if (path.empty()) throw ConfigError("trace workload needs a path: trace:<file>");
    return {WorkloadKind::kTrace, path};
  }
  throw ConfigError("unknown workload '" + s + "'");
}

u64 parse_u64(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    u64 v = std::stoull(value, &pos, 0);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + value + "'");
  }
}

}  // namespace

std::string SimConfig::config_name() const {
  return std::string(to_string(network)) + "/" + to_string(memory);
}

std::string SimConfig::workload_name() const {
  if (workload == WorkloadKind::kTrace) return "trace:" + trace_path;
  return to_string(workload);
}

void SimConfig::apply(const std::string& key, const std::string& value) {
  if (key == "network") {
    network = parse_network(value);
  } else if (key == "memory") {
    memory = parse_memory(value);
  } else if (key == "workload") {
    auto [kind, path] = parse_workload(value);
    workload = kind;
    trace_path = path;
  } else if (key == "requests") {
    request_target = parse_u64(key, value);
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "mshr_capacity") {
    mshr_capacity = static_cast<u32>(parse_u64(key, value));
  } else if (key == "hub_queue_depth") {
    hub_queue_depth = static_cast<u32>(parse_u64(key, value));
  } else if (key == "mesh_buffer_flits") {
    mesh_buffer_flits = static_cast<u32>(parse_u64(key, value));
  } else if (key == "nic_queue_depth") {
    nic_queue_depth = static_cast<u32>(parse_u64(key, value));
  } else if (key == "mem_queue_depth") {
    mem_queue_depth = static_cast<u32>(parse_u64(key, value));
  } else if (key == "hotspot_target") {
    hotspot_target = static_cast<ClusterId>(parse_u64(key, value));
  } else if (key == "burst_epoch_cycles") {
    burst_epoch_cycles = parse_u64(key, value);
  } else if (key == "burst_size") {
    burst_size = static_cast<u32>(parse_u64(key, value));
  } else if (key == "barrier_mode") {
    if (value == "ideal") barrier_mode = BarrierMode::kIdeal;
    else if (value == "bus") barrier_mode = BarrierMode::kBus;
    else throw ConfigError("bad barrier_mode '" + value + "' (expected ideal|bus)");
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void SimConfig::validate() const {
  if (workload == WorkloadKind::kTrace && trace_path.empty()) {
    throw ConfigError("trace workload without a path");
  }
  if (workload != WorkloadKind::kTrace && request_target == 0) {
    throw ConfigError("requests must be > 0 for synthetic workloads");
  }
  if (mshr_capacity == 0 || hub_queue_depth == 0 || mesh_buffer_flits == 0 ||
      nic_queue_depth == 0 || mem_queue_depth == 0) {
    throw ConfigError("queue and buffer depths must be > 0");
  }
  if (hotspot_target >= kClusters) {
    throw ConfigError("hotspot_target out of range");
  }
  if (workload == WorkloadKind::kBursty && burst_size == 0) {
    throw ConfigError("burst_size must be > 0");
  }
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  u32 lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    size_t eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = body.substr(0, eq);
    std::string value = body.substr(eq + 1);
    auto strip = [](std::string s) {
      size_t x = s.find_first_not_of(" \t");
      size_t y = s.find_last_not_of(" \t");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    try {
      base.apply(strip(key), strip(value));
    } catch (const ConfigError& err) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + err.what());
    }
  }
  return base;
}

}  // namespace pnoc
