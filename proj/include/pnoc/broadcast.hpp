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
#ifndef PNOC_BROADCAST_HPP_
#define PNOC_BROADCAST_HPP_

#include <array>
#include <deque>
#include <functional>

#include "pnoc/arbitration.hpp"
#include "pnoc/metrics.hpp"

namespace pnoc {

// All-cluster notification bus. The waveguide passes every cluster twice:
// writers modulate on the first pass at their own position, every cluster
// detects on the second pass, so receiver j sits at coil position 64 + j.
// The single bus token (index 64 on the shared arbitration ring) serializes
// writers. Payloads are header-sized tags consumed directly by the workload
// layer on arrival.
class BroadcastBus {
 public:
  static constexpr u32 kToken = kClusters;
  static constexpr u32 kCoilPositions = 2 * kClusters;

  BroadcastBus(EventEngine* engine, TokenRing* ring, Stats* stats);

  using DeliveryFn = std::function<void(ClusterId receiver, u64 tag, SimTime)>;
  using CompleteFn = std::function<void(u64 tag, ClusterId src, SimTime)>;

  void set_delivery_handler(DeliveryFn fn) { on_delivery_ = std::move(fn); }
  void set_complete_handler(CompleteFn fn) { on_complete_ = std::move(fn); }

  void broadcast(ClusterId src, u64 tag);
  void on_grant(ClusterId src, u32 token);

  // Second-pass phase distance from writer src to receiver j.
  static u64 coil_distance(ClusterId src, ClusterId j) {
    return static_cast<u64>(kClusters) + j - src;
  }

  u64 busy_phases() const { return busy_phases_; }
  u64 sent() const { return sent_; }

 private:
  void advance(ClusterId src);

  EventEngine* engine_;
  TokenRing* ring_;
  Stats* stats_;
  DeliveryFn on_delivery_;
  CompleteFn on_complete_;

  struct Egress {
    std::deque<u64> q;
    bool active = false;  // token requested or sending
  };
  std::array<Egress, kClusters> egress_{};
  u64 busy_phases_ = 0;
  u64 sent_ = 0;
};

}  // namespace pnoc

#endif  // PNOC_BROADCAST_HPP_
