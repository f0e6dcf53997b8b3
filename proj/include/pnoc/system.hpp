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
#ifndef PNOC_SYSTEM_HPP_
#define PNOC_SYSTEM_HPP_

#include <memory>
#include <vector>

#include "pnoc/broadcast.hpp"
#include "pnoc/cluster.hpp"
#include "pnoc/emesh.hpp"
#include "pnoc/traffic.hpp"
#include "pnoc/xbar.hpp"

namespace pnoc {

// Builds one chip from a config and runs one workload to completion. A
// custom driver factory replaces the workload selection (for probing and
// tests); everything else is wired identically.
class System {
 public:
  using DriverFactory =
      std::function<std::unique_ptr<TrafficDriver>(const DriverContext&)>;

  explicit System(const SimConfig& cfg, DriverFactory factory = {});

  RunResult run();

  EventEngine& engine() { return engine_; }
  Stats& stats() { return stats_; }
  const SimConfig& config() const { return cfg_; }
  Cluster& cluster(ClusterId c) { return *clusters_[c]; }
  MemoryController& memory(ClusterId c) { return *mems_[c]; }
  TokenRing& ring() { return *ring_; }
  BroadcastBus& bus() { return *bus_; }
  TrafficDriver& driver() { return *driver_; }
  XbarNetwork* xbar() { return xbar_; }
  MeshNetwork* mesh() { return mesh_; }

 private:
  SimConfig cfg_;
  EventEngine engine_;
  Stats stats_;
  std::vector<std::unique_ptr<Cluster>> clusters_;
  std::vector<std::unique_ptr<MemoryController>> mems_;
  std::unique_ptr<TokenRing> ring_;
  std::unique_ptr<BroadcastBus> bus_;
  std::unique_ptr<Network> net_;
  XbarNetwork* xbar_ = nullptr;
  MeshNetwork* mesh_ = nullptr;
  std::unique_ptr<TrafficDriver> driver_;
};

}  // namespace pnoc

#endif  // PNOC_SYSTEM_HPP_
