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
#ifndef PNOC_XBAR_HPP_
#define PNOC_XBAR_HPP_

#include <array>
#include <deque>
#include <vector>

#include "pnoc/arbitration.hpp"
#include "pnoc/cluster.hpp"

namespace pnoc {

// Destination-routed optical crossbar. Each destination owns one data
// channel that loops past every cluster; a sender acquires the channel's
// token, modulates for the message's serialization time, and the wavefront
// reaches the destination's detector after one ring position per phase of
// travel. Distance is measured downstream from sender to destination, with a
// full loop for sending to the channel of your own position.
//
// Before requesting the token the sender reserves a slot in the destination
// hub's inbound pool, so a delivery can always be consumed on arrival.
class XbarNetwork final : public Network {
 public:
  XbarNetwork(EventEngine* engine, TokenRing* ring,
              std::vector<Cluster*> clusters, const SimConfig& cfg,
              Stats* stats);

  bool try_send(Message* m) override;
  void set_inject_space_handler(ClusterId c, std::function<void()> fn) override;

  // Wired to the token ring's grant dispatch for tokens 0..63.
  void on_grant(ClusterId src, u32 token);

  // Downstream phase distance from src to the detector of channel dst.
  static u64 channel_distance(ClusterId src, ClusterId dst) {
    u64 d = (static_cast<u64>(dst) + kClusters - src) % kClusters;
    return d == 0 ? kClusters : d;
  }

  u64 occupancy_violations() const { return occupancy_violations_; }
  u64 busy_phases(ClusterId channel) const { return busy_phases_[channel]; }
  u32 queued_requests(ClusterId src) const { return request_live_[src]; }

 private:
  struct Egress {
    enum class St : u8 { kIdle, kWaitCredit, kWaitToken, kSending };
    std::deque<Message*> q;
    St st = St::kIdle;
  };

  Egress& eg(ClusterId src, ClusterId dst) {
    return egress_[static_cast<size_t>(src) * kClusters + dst];
  }
  void advance(ClusterId src, ClusterId dst);
  void got_credit(ClusterId src, ClusterId dst);

  EventEngine* engine_;
  TokenRing* ring_;
  std::vector<Cluster*> clusters_;
  Stats* stats_;
  u32 inject_cap_;

  std::vector<Egress> egress_;
  std::array<u32, kClusters> request_live_{};
  std::array<std::function<void()>, kClusters> inject_space_;
  std::array<u64, kClusters> last_tail_{};
  std::array<u64, kClusters> busy_phases_{};
  u64 occupancy_violations_ = 0;
};

}  // namespace pnoc

#endif  // PNOC_XBAR_HPP_
