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
#ifndef PNOC_EMESH_HPP_
#define PNOC_EMESH_HPP_

#include <array>
#include <deque>
#include <memory>
#include <vector>

#include "pnoc/cluster.hpp"

namespace pnoc {

class MeshNetwork;

// Wormhole mesh router with dimension-order routing: rows (the first grid
// coordinate) are corrected before columns. Five ports; each input holds a
// small flit FIFO replenished by credits, each output is owned by one worm
// from head allocation until its tail leaves. A head flit needs its whole
// downstream buffer slot guaranteed only one hop at a time (credits); the
// ejection port instead needs a slot in the cluster's inbound pool before it
// is allocated. Every router-to-router hop costs a fixed pipeline delay with
// one flit per cycle of throughput.
class MeshRouter {
 public:
  // Port order: +row, -row, +col, -col, local/eject.
  static constexpr u32 kPRow = 0;
  static constexpr u32 kMRow = 1;
  static constexpr u32 kPCol = 2;
  static constexpr u32 kMCol = 3;
  static constexpr u32 kLocal = 4;
  static constexpr u32 kEject = 4;
  static constexpr u32 kPorts = 5;
  static constexpr u32 kHopCycles = 5;

  struct Flit {
    Message* msg;
    u16 index;
    bool last;
  };

  MeshRouter(EventEngine* engine, MeshNetwork* net, ClusterId id,
             Cluster* cluster, const SimConfig& cfg, u32 width_bytes);

  static u32 opposite(u32 port) { return port ^ 1u; }
  u32 route(const Message* m) const;

  // NIC side (hub-facing).
  bool nic_try_send(Message* m);
  void set_inject_space_handler(std::function<void()> fn) {
    inject_space_ = std::move(fn);
  }

  // Link side.
  void connect(u32 port, MeshRouter* neighbor) { neighbors_[port] = neighbor; }
  void receive(u32 port, Flit f);
  void on_credit(u32 port);

  u64 sent_flits(u32 port) const { return sent_flits_[port]; }
  size_t buffered(u32 port) const { return in_buf_[port].size(); }
  size_t nic_backlog() const { return nic_q_.size(); }
  std::string blocked_report() const;

 private:
  friend class MeshNetwork;

  void schedule_tick(u64 cycle);
  void tick();
  bool allocate();
  bool move();
  void nic_stream();
  void schedule_stream(u64 cycle);

  static constexpr u64 kNever = ~0ull;

  EventEngine* engine_;
  MeshNetwork* net_;
  ClusterId id_;
  u32 row_;
  u32 col_;
  Cluster* cluster_;
  u32 width_;
  u32 buf_cap_;
  u32 inject_cap_;

  std::array<MeshRouter*, 4> neighbors_{};
  std::array<std::deque<Flit>, kPorts> in_buf_;
  std::array<u32, 4> credits_;
  std::array<Message*, kPorts> out_owner_{};
  std::array<u64, kPorts> out_next_free_{};
  std::array<u64, kPorts> last_move_cycle_;
  std::array<u32, kPorts> rr_{};
  std::array<u64, 4> sent_flits_{};

  u64 tick_scheduled_ = kNever;
  bool eject_waiting_ = false;
  u32 granted_reservations_ = 0;

  // NIC: one FIFO of whole messages, streamed into the local input buffer a
  // flit per cycle. Requests are capped; responses are always accepted so
  // the memory pipeline never waits on the injection queue.
  std::deque<Message*> nic_q_;
  u32 request_live_ = 0;
  Message* streaming_ = nullptr;
  u16 next_flit_ = 0;
  u16 total_flits_ = 0;
  u64 next_push_cycle_ = 0;
  u64 stream_scheduled_ = kNever;
  bool nic_blocked_ = false;
  std::function<void()> inject_space_;
};

// The full grid plus per-cluster NICs behind the Network interface.
class MeshNetwork final : public Network {
 public:
  MeshNetwork(EventEngine* engine, std::vector<Cluster*> clusters,
              const SimConfig& cfg, Stats* stats);

  bool try_send(Message* m) override;
  void set_inject_space_handler(ClusterId c, std::function<void()> fn) override;

  static u32 link_width_bytes(NetworkKind kind) {
    return kind == NetworkKind::kHMesh ? 16 : 8;
  }

  MeshRouter& router(ClusterId c) { return *routers_[c]; }
  Stats* stats() { return stats_; }
  std::string blocked_report() const;

 private:
  EventEngine* engine_;
  Stats* stats_;
  std::vector<std::unique_ptr<MeshRouter>> routers_;
};

}  // namespace pnoc

#endif  // PNOC_EMESH_HPP_
