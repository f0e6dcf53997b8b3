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
#include "pnoc/broadcast.hpp"

#include <memory>

#include "pnoc/message.hpp"

namespace pnoc {

BroadcastBus::BroadcastBus(EventEngine* engine, TokenRing* ring, Stats* stats)
    : engine_(engine), ring_(ring), stats_(stats) {}

void BroadcastBus::broadcast(ClusterId src, u64 tag) {
  Egress& e = egress_[src];
  e.q.push_back(tag);
  if (!e.active) advance(src);
}

void BroadcastBus::advance(ClusterId src) {
  Egress& e = egress_[src];
  if (e.q.empty()) {
    e.active = false;
    return;
  }
  e.active = true;
  ring_->request(src, kToken);
}

void BroadcastBus::on_grant(ClusterId src, u32 token) {
  if (token != kToken) throw std::logic_error("broadcast grant for a data token");
  Egress& e = egress_[src];
  if (!e.active || e.q.empty()) {
    throw std::logic_error("broadcast grant without a waiting writer");
  }
  u64 tag = e.q.front();
  e.q.pop_front();

  u64 g = engine_->now().phases;
  u64 mod_phases = 8ull * serialize_cycles(kHeaderBytes);
  u64 tail = g + mod_phases;
  busy_phases_ += mod_phases;
  ++sent_;

  engine_->schedule(SimTime{tail}, [this, src] {
    ring_->release(src, kToken);
    advance(src);
  });

  auto remaining = std::make_shared<u32>(kClusters);
  for (ClusterId j = 0; j < kClusters; ++j) {
    SimTime at = SimTime{tail + coil_distance(src, j)}.ceil_cycle();
    engine_->schedule(at, [this, src, tag, j, remaining] {
      if (on_delivery_) on_delivery_(j, tag, engine_->now());
      if (--*remaining == 0) {
        ++stats_->broadcasts_completed;
        stats_->last_completion = engine_->now();
        if (on_complete_) on_complete_(tag, src, engine_->now());
      }
    });
  }
}

}  // namespace pnoc
