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
#ifndef PNOC_METRICS_HPP_
#define PNOC_METRICS_HPP_

#include <array>
#include <string>
#include <vector>

#include "pnoc/config.hpp"
#include "pnoc/types.hpp"

namespace pnoc {

// Completed-transaction latency histogram: fixed-width buckets plus an
// overflow bin for anything past the last edge.
class LatencyHistogram {
 public:
  static constexpr u32 kBuckets = 512;
  static constexpr double kBucketNs = 20.0;

  void add(double ns) {
    auto idx = static_cast<u64>(ns / kBucketNs);
    if (idx < kBuckets) {
      ++counts_[idx];
    } else {
      ++overflow_;
    }
  }
  u64 count(u32 bucket) const { return counts_[bucket]; }
  u64 overflow() const { return overflow_; }
  u64 total() const;

 private:
  std::array<u64, kBuckets> counts_{};
  u64 overflow_ = 0;
};

// Raw counters filled in while a simulation runs.
struct Stats {
  u64 transactions_completed = 0;
  u64 payload_bytes = 0;
  SimTime last_completion{};
  double latency_ns_sum = 0.0;
  u64 latency_samples = 0;  // transactions plus finished broadcasts
  LatencyHistogram histogram;

  u64 messages_delivered = 0;
  u64 message_hops = 0;   // per-message grid hops, both directions, self = 0
  u64 flit_hops = 0;      // router-to-router flit transfers (mesh only)
  u64 channel_busy_phases = 0;  // optical data-channel occupancy
  u64 broadcasts_completed = 0;
  u64 barriers_released = 0;
  u64 mshr_merges = 0;
};

// Energy and power coefficients.
inline constexpr double kXbarPowerW = 26.0;
inline constexpr double kMeshHopEnergyJ = 196e-12;
inline constexpr double kOcmMilliwattPerGbps = 0.078;
inline constexpr double kEcmMilliwattPerGbps = 2.0;

double memory_power_w(double bytes_per_second, MemoryKind kind);
double mesh_energy_j(u64 message_hops);

// Static photonic component inventory for the full design.
struct PhotonicInventory {
  u32 memory_waveguides = kClusters * 2;
  u32 xbar_waveguides = kClusters * 4;
  u32 broadcast_waveguides = 1;
  u32 arbitration_waveguides = 2;
  u32 clock_waveguides = 1;

  u32 memory_rings = kClusters * 256;
  u32 xbar_rings = kClusters * kClusters * 256;
  u32 broadcast_rings = kClusters * 128;
  u32 arbitration_rings = kClusters * 128;
  u32 clock_rings = kClusters;

  u32 total_waveguides() const {
    return memory_waveguides + xbar_waveguides + broadcast_waveguides +
           arbitration_waveguides + clock_waveguides;
  }
  u64 total_rings() const {
    return static_cast<u64>(memory_rings) + xbar_rings + broadcast_rings +
           arbitration_rings + clock_rings;
  }
};

// "64", "8 K", "1024 K"; inexact multiples round down with a '~' prefix.
std::string ring_count_str(u64 n);
std::string inventory_text();

// One finished run, reduced to the reportable figures.
struct RunResult {
  std::string config;     // "xbar/ocm"
  std::string workload;   // "uniform", "trace:foo"
  u64 runtime_cycles = 0;
  double bandwidth_gbps = 0.0;   // payload GB/s
  double avg_latency_ns = 0.0;
  double power_w = 0.0;          // interconnect power
  double mem_power_w = 0.0;      // memory channel power
  Stats stats;
};

RunResult reduce(const SimConfig& cfg, const Stats& stats);

std::string csv_header(bool with_speedup = false);
std::string csv_row(const RunResult& r);
std::string csv_row(const RunResult& r, double speedup);
std::string histogram_csv(const LatencyHistogram& h);

double geomean(const std::vector<double>& xs);

}  // namespace pnoc

#endif  // PNOC_METRICS_HPP_
