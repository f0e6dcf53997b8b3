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
#include "pnoc/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace pnoc {

u64 LatencyHistogram::total() const {
  u64 t = overflow_;
  for (u64 c : counts_) t += c;
  return t;
}

double memory_power_w(double bytes_per_second, MemoryKind kind) {
  double gbps = bytes_per_second * 8.0 / 1e9;
  double mw_per_gbps =
      kind == MemoryKind::kOcm ? kOcmMilliwattPerGbps : kEcmMilliwattPerGbps;
  return gbps * mw_per_gbps / 1000.0;
}

double mesh_energy_j(u64 message_hops) {
  return static_cast<double>(message_hops) * kMeshHopEnergyJ;
}

std::string ring_count_str(u64 n) {
  char buf[32];
  if (n < 1024) {
    snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(n));
  } else if (n % 1024 == 0) {
    snprintf(buf, sizeof(buf), "%llu K", static_cast<unsigned long long>(n / 1024));
  } else {
    snprintf(buf, sizeof(buf), "~%llu K", static_cast<unsigned long long>(n / 1024));
  }
  return buf;
}

std::string inventory_text() {
  PhotonicInventory inv;
  char buf[1024];
  snprintf(buf, sizeof(buf),
           "waveguides:\n"
           "  memory       %6u\n"
           "  crossbar     %6u\n"
           "  broadcast    %6u\n"
           "  arbitration  %6u\n"
           "  clock        %6u\n"
           "  total        %6u\n"
           "rings:\n"
           "  memory       %8s\n"
           "  crossbar     %8s\n"
           "  broadcast    %8s\n"
           "  arbitration  %8s\n"
           "  clock        %8s\n"
           "  total        %8s\n",
           inv.memory_waveguides, inv.xbar_waveguides, inv.broadcast_waveguides,
           inv.arbitration_waveguides, inv.clock_waveguides, inv.total_waveguides(),
           ring_count_str(inv.memory_rings).c_str(),
           ring_count_str(inv.xbar_rings).c_str(),
           ring_count_str(inv.broadcast_rings).c_str(),
           ring_count_str(inv.arbitration_rings).c_str(),
           ring_count_str(inv.clock_rings).c_str(),
           ring_count_str(inv.total_rings()).c_str());
  return buf;
}

RunResult reduce(const SimConfig& cfg, const Stats& stats) {
  RunResult r;
  r.config = cfg.config_name();
  r.workload = cfg.workload_name();
  r.stats = stats;
  r.runtime_cycles = stats.last_completion.cycle();
  double seconds = static_cast<double>(r.runtime_cycles) / kClockHz;
  if (seconds > 0.0) {
    r.bandwidth_gbps = static_cast<double>(stats.payload_bytes) / seconds / 1e9;
  }
  if (stats.latency_samples > 0) {
    r.avg_latency_ns = stats.latency_ns_sum / static_cast<double>(stats.latency_samples);
  }
  if (cfg.network == NetworkKind::kXbar) {
    r.power_w = kXbarPowerW;
  } else if (seconds > 0.0) {
    r.power_w = mesh_energy_j(stats.message_hops) / seconds;
  }
  r.mem_power_w = memory_power_w(r.bandwidth_gbps * 1e9, cfg.memory);
  return r;
}

std::string csv_header(bool with_speedup) {
  std::string h = "config,workload,runtime_cycles,bandwidth_GBps,avg_latency_ns,power_W,mem_power_W";
  if (with_speedup) h += ",speedup";
  h += "\n";
  return h;
}

namespace {

std::string format_row(const RunResult& r, const double* speedup) {
  char buf[512];
  int n = snprintf(buf, sizeof(buf), "%s,%s,%llu,%.9g,%.9g,%.9g,%.9g",
                   r.config.c_str(), r.workload.c_str(),
                   static_cast<unsigned long long>(r.runtime_cycles),
                   r.bandwidth_gbps, r.avg_latency_ns, r.power_w, r.mem_power_w);
  std::string row(buf, static_cast<size_t>(n));
  if (speedup != nullptr) {
    snprintf(buf, sizeof(buf), ",%.9g", *speedup);
    row += buf;
  }
  row += "\n";
  return row;
}

}  // namespace

std::string csv_row(const RunResult& r) { return format_row(r, nullptr); }

std::string csv_row(const RunResult& r, double speedup) {
  return format_row(r, &speedup);
}

std::string histogram_csv(const LatencyHistogram& h) {
  std::string out = "bucket_ns,count\n";
  char buf[64];
  for (u32 i = 0; i < LatencyHistogram::kBuckets; ++i) {
    snprintf(buf, sizeof(buf), "%u,%llu\n",
             static_cast<u32>(i * LatencyHistogram::kBucketNs),
             static_cast<unsigned long long>(h.count(i)));
    out += buf;
  }
  snprintf(buf, sizeof(buf), "overflow,%llu\n",
           static_cast<unsigned long long>(h.overflow()));
  out += buf;
  return out;
}

double geomean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double log_sum = 0.0;
  for (double x : xs) log_sum += std::log(x);
  return std::exp(log_sum / static_cast<double>(xs.size()));
}

}  // namespace pnoc
