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
#include "pnoc/xbar.hpp"

namespace pnoc {

XbarNetwork::XbarNetwork(EventEngine* engine, TokenRing* ring,
                         std::vector<Cluster*> clusters, const SimConfig& cfg,
                         Stats* stats)
    : engine_(engine),
      ring_(ring),
      clusters_(std::move(clusters)),
      stats_(stats),
      inject_cap_(cfg.nic_queue_depth),
      egress_(static_cast<size_t>(kClusters) * kClusters) {}

bool XbarNetwork::try_send(Message* m) {
  ClusterId src = m->src;
  ClusterId dst = m->dst;
  if (src == dst) throw std::logic_error("crossbar send to self");
  if (is_request(m->kind)) {
    if (request_live_[src] >= inject_cap_) return false;
    ++request_live_[src];
  }
  Egress& e = eg(src, dst);
  e.q.push_back(m);
  if (e.st == Egress::St::kIdle) advance(src, dst);
  return true;
}

void XbarNetwork::set_inject_space_handler(ClusterId c, std::function<void()> fn) {
  inject_space_[c] = std::move(fn);
}

void XbarNetwork::advance(ClusterId src, ClusterId dst) {
  Egress& e = eg(src, dst);
  if (e.q.empty()) {
    e.st = Egress::St::kIdle;
    return;
  }
  e.st = Egress::St::kWaitCredit;
  if (clusters_[dst]->try_reserve_inbound()) {
    got_credit(src, dst);
  } else {
    clusters_[dst]->add_inbound_waiter([this, src, dst] { got_credit(src, dst); });
  }
}

void XbarNetwork::got_credit(ClusterId src, ClusterId dst) {
  Egress& e = eg(src, dst);
  e.st = Egress::St::kWaitToken;
  ring_->request(src, dst);
}

void XbarNetwork::on_grant(ClusterId src, u32 token) {
  auto dst = static_cast<ClusterId>(token);
  Egress& e = eg(src, dst);
  if (e.st != Egress::St::kWaitToken || e.q.empty()) {
    throw std::logic_error("channel grant without a waiting sender");
  }
  e.st = Egress::St::kSending;

  Message* m = e.q.front();
  u64 g = engine_->now().phases;
  m->injected = SimTime{g};
  u64 mod_phases = 8ull * serialize_cycles(m->size_bytes());
  u64 tail = g + mod_phases;
  u64 dist = channel_distance(src, dst);

  u64 head_at_home = g + dist;
  if (head_at_home < last_tail_[dst]) ++occupancy_violations_;
  last_tail_[dst] = tail + dist;
  busy_phases_[dst] += mod_phases;
  stats_->channel_busy_phases += mod_phases;

  engine_->schedule(SimTime{tail}, [this, src, dst, m] {
    ring_->release(src, dst);
    Egress& ee = eg(src, dst);
    ee.q.pop_front();
    if (is_request(m->kind)) {
      --request_live_[src];
      if (inject_space_[src]) inject_space_[src]();
    }
    advance(src, dst);
  });
  u64 deliver = (tail + dist + kPhasesPerCycle - 1) / kPhasesPerCycle;
  engine_->schedule(SimTime::cycles(deliver),
                    [this, dst, m] { clusters_[dst]->deliver_reserved(m); });
}

}  // namespace pnoc
