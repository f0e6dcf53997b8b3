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
#ifndef PNOC_TYPES_HPP_
#define PNOC_TYPES_HPP_

#include <cstdint>
#include <cstdlib>

namespace pnoc {

using u8 = std::uint8_t;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using s32 = std::int32_t;
using s64 = std::int64_t;

// Chip-wide constants. The clock is 5 GHz; optical hops advance in
// eighth-cycle steps, so simulated time is kept in "phases" of 1/8 cycle.
constexpr u32 kClusters = 64;
constexpr u32 kGridDim = 8;          // clusters form an 8x8 grid
constexpr u32 kCoresPerCluster = 4;
constexpr u32 kThreadsPerCore = 4;
constexpr u32 kThreadsPerCluster = kCoresPerCluster * kThreadsPerCore;
constexpr u32 kThreads = kClusters * kThreadsPerCluster;  // 1024
constexpr u32 kLineBytes = 64;
constexpr u32 kHeaderBytes = 8;
constexpr u32 kPhasesPerCycle = 8;
constexpr double kClockHz = 5.0e9;
constexpr double kNsPerCycle = 1.0e9 / kClockHz;  // 0.2 ns

// Simulated time: a monotonically increasing count of phases. One cycle is
// 8 phases; electrical components only ever use whole cycles, the optical
// ring and coil advance one phase per cluster position.
struct SimTime {
  u64 phases = 0;

  constexpr SimTime() = default;
  constexpr explicit SimTime(u64 p) : phases(p) {}
  static constexpr SimTime cycles(u64 c) { return SimTime(c * kPhasesPerCycle); }

  constexpr u64 cycle() const { return phases / kPhasesPerCycle; }
  constexpr u32 phase() const { return static_cast<u32>(phases % kPhasesPerCycle); }
  constexpr bool cycle_aligned() const { return phase() == 0; }

  // Smallest whole-cycle time >= this time; used for delivery events.
  constexpr SimTime ceil_cycle() const {
    return SimTime((phases + kPhasesPerCycle - 1) / kPhasesPerCycle * kPhasesPerCycle);
  }

  constexpr double ns() const {
    return static_cast<double>(phases) / kPhasesPerCycle * kNsPerCycle;
  }

  constexpr SimTime operator+(SimTime o) const { return SimTime(phases + o.phases); }
  constexpr SimTime operator-(SimTime o) const { return SimTime(phases - o.phases); }
  SimTime& operator+=(SimTime o) { phases += o.phases; return *this; }
  constexpr auto operator<=>(const SimTime&) const = default;
};

constexpr SimTime kCycle = SimTime::cycles(1);
constexpr SimTime kPhase = SimTime(1);

using ClusterId = u32;
using ThreadId = u32;

constexpr u32 grid_row(ClusterId c) { return c / kGridDim; }
constexpr u32 grid_col(ClusterId c) { return c % kGridDim; }
constexpr ClusterId cluster_at(u32 row, u32 col) { return row * kGridDim + col; }

constexpr u32 manhattan_hops(ClusterId a, ClusterId b) {
  s32 di = static_cast<s32>(grid_row(a)) - static_cast<s32>(grid_row(b));
  s32 dj = static_cast<s32>(grid_col(a)) - static_cast<s32>(grid_col(b));
  return static_cast<u32>((di < 0 ? -di : di) + (dj < 0 ? -dj : dj));
}

constexpr ClusterId home_cluster(ThreadId t) { return t / kThreadsPerCluster; }

// Cache lines interleave across the 64 memory controllers.
constexpr ClusterId controller_of(u64 address) {
  return static_cast<ClusterId>((address / kLineBytes) % kClusters);
}

constexpr u32 ceil_div(u32 a, u32 b) { return (a + b - 1) / b; }

}  // namespace pnoc

#endif  // PNOC_TYPES_HPP_
