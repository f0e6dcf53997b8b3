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
#include "pnoc/emesh.hpp"

#include <cstdio>

namespace pnoc {

MeshRouter::MeshRouter(EventEngine* engine, MeshNetwork* net, ClusterId id,
                       Cluster* cluster, const SimConfig& cfg, u32 width_bytes)
    : engine_(engine),
      net_(net),
      id_(id),
      row_(grid_row(id)),
      col_(grid_col(id)),
      cluster_(cluster),
      width_(width_bytes),
      buf_cap_(cfg.mesh_buffer_flits),
      inject_cap_(cfg.nic_queue_depth) {
  credits_.fill(cfg.mesh_buffer_flits);
  last_move_cycle_.fill(kNever);
}

u32 MeshRouter::route(const Message* m) const {
  u32 drow = grid_row(m->dst);
  u32 dcol = grid_col(m->dst);
  if (drow > row_) return kPRow;
  if (drow < row_) return kMRow;
  if (dcol > col_) return kPCol;
  if (dcol < col_) return kMCol;
  return kEject;
}

bool MeshRouter::nic_try_send(Message* m) {
  if (m->dst == id_) throw std::logic_error("mesh send to self");
  if (is_request(m->kind)) {
    if (request_live_ >= inject_cap_) return false;
    ++request_live_;
  }
  nic_q_.push_back(m);
  nic_stream();
  return true;
}

void MeshRouter::receive(u32 port, Flit f) {
  if (in_buf_[port].size() >= buf_cap_) {
    throw std::logic_error("mesh buffer overrun (credit protocol broken)");
  }
  in_buf_[port].push_back(f);
  schedule_tick(engine_->now().cycle());
}

void MeshRouter::on_credit(u32 port) {
  ++credits_[port];
  if (credits_[port] > buf_cap_) throw std::logic_error("credit overflow");
  schedule_tick(engine_->now().cycle());
}

void MeshRouter::schedule_tick(u64 cycle) {
  if (tick_scheduled_ == cycle) return;
  tick_scheduled_ = cycle;
  engine_->schedule(SimTime::cycles(cycle), [this] { tick(); });
}

bool MeshRouter::allocate() {
  bool any = false;
  for (u32 o = 0; o < kPorts; ++o) {
    if (out_owner_[o] != nullptr) continue;
    for (u32 k = 0; k < kPorts; ++k) {
      u32 p = (rr_[o] + k) % kPorts;
      if (in_buf_[p].empty()) continue;
      const Flit& f = in_buf_[p].front();
      if (f.index != 0) continue;  // only heads request outputs
      if (route(f.msg) != o) continue;
      if (o == kEject) {
        if (granted_reservations_ > 0) {
          --granted_reservations_;
        } else if (!cluster_->try_reserve_inbound()) {
          if (!eject_waiting_) {
            eject_waiting_ = true;
            cluster_->add_inbound_waiter([this] {
              eject_waiting_ = false;
              ++granted_reservations_;
              schedule_tick(engine_->now().ceil_cycle().cycle());
            });
          }
          break;  // all ejecting heads share the same pool
        }
      }
      out_owner_[o] = f.msg;
      rr_[o] = (p + 1) % kPorts;
      any = true;
      break;
    }
  }
  return any;
}

bool MeshRouter::move() {
  u64 now = engine_->now().cycle();
  bool any = false;
  bool local_freed = false;
  for (u32 p = 0; p < kPorts; ++p) {
    if (in_buf_[p].empty()) continue;
    if (last_move_cycle_[p] == now) continue;
    Flit f = in_buf_[p].front();
    u32 o = route(f.msg);
    if (out_owner_[o] != f.msg) continue;
    if (out_next_free_[o] > now) continue;

    if (o == kEject) {
      in_buf_[p].pop_front();
      out_next_free_[o] = now + 1;
      last_move_cycle_[p] = now;
      any = true;
      if (f.last) {
        out_owner_[o] = nullptr;
        cluster_->deliver_reserved(f.msg);
      }
    } else {
      if (credits_[o] == 0) continue;
      MeshRouter* next = neighbors_[o];
      if (next == nullptr) throw std::logic_error("route walked off the grid");
      --credits_[o];
      in_buf_[p].pop_front();
      out_next_free_[o] = now + 1;
      last_move_cycle_[p] = now;
      any = true;
      ++sent_flits_[o];
      ++net_->stats()->flit_hops;
      if (f.last) out_owner_[o] = nullptr;
      u32 in_port = opposite(o);
      engine_->schedule(SimTime::cycles(now + kHopCycles),
                        [next, in_port, f] { next->receive(in_port, f); });
    }

    if (p == kLocal) {
      local_freed = true;
    } else {
      MeshRouter* up = neighbors_[p];
      u32 up_out = opposite(p);
      engine_->schedule(SimTime::cycles(now + 1),
                        [up, up_out] { up->on_credit(up_out); });
    }
  }
  if (local_freed) {
    nic_blocked_ = false;
    nic_stream();
  }
  return any;
}

void MeshRouter::tick() {
  tick_scheduled_ = kNever;
  bool progress = allocate();
  progress |= move();
  progress |= allocate();  // tails freed this cycle can hand ports over
  if (progress) schedule_tick(engine_->now().cycle() + 1);
}

void MeshRouter::schedule_stream(u64 cycle) {
  if (stream_scheduled_ == cycle) return;
  stream_scheduled_ = cycle;
  engine_->schedule(SimTime::cycles(cycle), [this] {
    stream_scheduled_ = kNever;
    nic_stream();
  });
}

void MeshRouter::nic_stream() {
  if (streaming_ == nullptr) {
    if (nic_q_.empty()) return;
    streaming_ = nic_q_.front();
    total_flits_ = static_cast<u16>(ceil_div(streaming_->size_bytes(), width_));
    next_flit_ = 0;
  }
  u64 now = engine_->now().cycle();
  if (next_push_cycle_ > now) {
    schedule_stream(next_push_cycle_);
    return;
  }
  if (in_buf_[kLocal].size() >= buf_cap_) {
    nic_blocked_ = true;  // move() wakes us when a local slot frees
    return;
  }

  if (next_flit_ == 0) streaming_->injected = SimTime::cycles(now);
  bool last = next_flit_ + 1 == total_flits_;
  in_buf_[kLocal].push_back(Flit{streaming_, next_flit_, last});
  schedule_tick(now);
  next_push_cycle_ = now + 1;
  ++next_flit_;
  if (last) {
    nic_q_.pop_front();
    if (is_request(streaming_->kind)) {
      --request_live_;
      if (inject_space_) inject_space_();
    }
    streaming_ = nullptr;
  }
  if (streaming_ != nullptr || !nic_q_.empty()) schedule_stream(now + 1);
}

std::string MeshRouter::blocked_report() const {
  char buf[160];
  snprintf(buf, sizeof(buf),
           "router %u: bufs %zu/%zu/%zu/%zu/%zu, credits %u/%u/%u/%u, nic %zu",
           id_, in_buf_[0].size(), in_buf_[1].size(), in_buf_[2].size(),
           in_buf_[3].size(), in_buf_[4].size(), credits_[0], credits_[1],
           credits_[2], credits_[3], nic_q_.size());
  return buf;
}

MeshNetwork::MeshNetwork(EventEngine* engine, std::vector<Cluster*> clusters,
                         const SimConfig& cfg, Stats* stats)
    : engine_(engine), stats_(stats) {
  u32 width = link_width_bytes(cfg.network);
  routers_.reserve(kClusters);
  for (ClusterId c = 0; c < kClusters; ++c) {
    routers_.push_back(
        std::make_unique<MeshRouter>(engine, this, c, clusters[c], cfg, width));
  }
  for (ClusterId c = 0; c < kClusters; ++c) {
    u32 r = grid_row(c);
    u32 j = grid_col(c);
    if (r + 1 < kGridDim)
      routers_[c]->connect(MeshRouter::kPRow, routers_[cluster_at(r + 1, j)].get());
    if (r > 0)
      routers_[c]->connect(MeshRouter::kMRow, routers_[cluster_at(r - 1, j)].get());
    if (j + 1 < kGridDim)
      routers_[c]->connect(MeshRouter::kPCol, routers_[cluster_at(r, j + 1)].get());
    if (j > 0)
      routers_[c]->connect(MeshRouter::kMCol, routers_[cluster_at(r, j - 1)].get());
  }
}

bool MeshNetwork::try_send(Message* m) { return routers_[m->src]->nic_try_send(m); }

void MeshNetwork::set_inject_space_handler(ClusterId c, std::function<void()> fn) {
  routers_[c]->set_inject_space_handler(std::move(fn));
}

std::string MeshNetwork::blocked_report() const {
  std::string out;
  for (const auto& r : routers_) {
    if (r->nic_backlog() > 0 || r->buffered(MeshRouter::kLocal) > 0) {
      out += "  " + r->blocked_report() + "\n";
      if (out.size() > 600) break;
    }
  }
  return out;
}

}  // namespace pnoc
