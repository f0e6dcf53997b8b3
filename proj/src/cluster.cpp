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
#include "pnoc/cluster.hpp"

#include <cstdio>

namespace pnoc {

Cluster::Cluster(EventEngine* engine, ClusterId id, const SimConfig& cfg, Stats* stats)
    : engine_(engine),
      id_(id),
      stats_(stats),
      mshr_capacity_(cfg.mshr_capacity),
      hub_depth_(cfg.hub_queue_depth),
      in_(engine, 0),  // bounded by the reservation pool, not the queue
      out_net_(engine, cfg.hub_queue_depth),
      out_mem_(engine, cfg.hub_queue_depth),
      memout_(engine, 0) {  // responses must never back up into the memory pipe
  entries_.resize(mshr_capacity_);
  free_entries_.reserve(mshr_capacity_);
  for (u32 i = 0; i < mshr_capacity_; ++i) {
    free_entries_.push_back(mshr_capacity_ - 1 - i);
  }
  index_.reserve(mshr_capacity_ * 2);

  in_.set_sink([this](Message* m) { return sink_in(m); });
  in_.set_space_handler([this] { grant_next_inbound(); });
  out_net_.set_sink([this](Message* m) { return sink_out_net(m); });
  out_net_.set_space_handler([this] {
    if (injector_wake_) injector_wake_();
  });
  out_mem_.set_sink([this](Message* m) { return sink_out_mem(m); });
  out_mem_.set_space_handler([this] {
    if (injector_wake_) injector_wake_();
  });
  memout_.set_sink([this](Message* m) { return sink_memout(m); });
}

void Cluster::connect(Network* net, MemoryController* mem) {
  net_ = net;
  mem_ = mem;
  mem_->set_response_sink([this](Message* m) { memout_.push(m); });
  if (net_ != nullptr) {
    net_->set_inject_space_handler(id_, [this] { out_net_.retry(); });
  }
}

Message* Cluster::alloc_message() {
  if (!message_pool_.empty()) {
    Message* m = message_pool_.back();
    message_pool_.pop_back();
    return m;
  }
  message_storage_.emplace_back();
  return &message_storage_.back();
}

void Cluster::recycle(Message* m) { message_pool_.push_back(m); }

Cluster::Issue Cluster::issue_miss(MessageKind kind, u64 address, ThreadId waiter) {
  if (!is_request(kind)) throw std::logic_error("issue_miss wants a request kind");
  u64 line = address / kLineBytes;
  u64 key = (line << 1) | (kind == MessageKind::kWriteReq ? 1u : 0u);
  auto it = index_.find(key);
  if (it != index_.end()) {
    entries_[it->second].waiters.push_back(waiter);
    ++stats_->mshr_merges;
    return Issue::kMerged;
  }
  if (occupancy_ == mshr_capacity_) return Issue::kStall;
  ClusterId dst = controller_of(address);
  ServiceQueue& q = dst == id_ ? out_mem_ : out_net_;
  if (q.full()) return Issue::kStall;

  u32 idx = free_entries_.back();
  free_entries_.pop_back();
  ++occupancy_;
  ++issued_;
  MshrEntry& e = entries_[idx];
  e.line = line;
  e.kind = kind;
  e.created = engine_->now();
  e.waiters.clear();
  e.waiters.push_back(waiter);
  index_.emplace(key, idx);

  Message* m = alloc_message();
  m->kind = kind;
  m->src = id_;
  m->dst = dst;
  m->address = address;
  m->transaction = idx;
  m->created = e.created;
  m->injected = e.created;
  m->delivered = e.created;
  q.push(m);
  return Issue::kAccepted;
}

bool Cluster::try_reserve_inbound() {
  if (inbound_reserved_ + in_.size() >= hub_depth_) return false;
  ++inbound_reserved_;
  return true;
}

void Cluster::add_inbound_waiter(std::function<void()> fn) {
  inbound_waiters_.push_back(std::move(fn));
}

void Cluster::deliver_reserved(Message* m) {
  if (inbound_reserved_ == 0) throw std::logic_error("delivery without reservation");
  --inbound_reserved_;
  m->delivered = engine_->now();
  ++stats_->messages_delivered;
  in_.push(m);
}

void Cluster::grant_next_inbound() {
  if (inbound_waiters_.empty()) return;
  if (inbound_reserved_ + in_.size() >= hub_depth_) return;
  ++inbound_reserved_;
  auto fn = std::move(inbound_waiters_.front());
  inbound_waiters_.pop_front();
  fn();
}

bool Cluster::sink_in(Message* m) {
  if (is_request(m->kind)) {
    if (mem_->try_accept(m)) return true;
    mem_->add_slot_waiter([this] { in_.retry(); });
    return false;
  }
  complete(m);
  return true;
}

bool Cluster::sink_out_net(Message* m) {
  m->injected = engine_->now();
  return net_->try_send(m);
}

bool Cluster::sink_out_mem(Message* m) {
  if (mem_->try_accept(m)) return true;
  mem_->add_slot_waiter([this] { out_mem_.retry(); });
  return false;
}

bool Cluster::sink_memout(Message* m) {
  if (m->dst == id_) {
    complete(m);
    return true;
  }
  if (!net_->try_send(m)) {
    throw std::logic_error("network refused a response");
  }
  return true;
}

void Cluster::complete(Message* resp) {
  u32 idx = resp->transaction;
  MshrEntry& e = entries_[idx];
  SimTime now = engine_->now();

  ++stats_->transactions_completed;
  stats_->payload_bytes += kLineBytes;
  stats_->last_completion = now;
  double ns = (now - e.created).ns();
  stats_->latency_ns_sum += ns;
  ++stats_->latency_samples;
  stats_->histogram.add(ns);
  stats_->message_hops += 2ull * manhattan_hops(id_, resp->src);

  u64 key = (e.line << 1) | (e.kind == MessageKind::kWriteReq ? 1u : 0u);
  index_.erase(key);
  if (on_complete_) on_complete_(id_, e.line, e.waiters, now);
  e.waiters.clear();
  free_entries_.push_back(idx);
  --occupancy_;
  recycle(resp);
  if (injector_wake_) injector_wake_();
}

std::string Cluster::blocked_report() const {
  char buf[160];
  snprintf(buf, sizeof(buf),
           "cluster %u: mshr %u/%u, in %zu, out_net %zu, out_mem %zu, memout %zu, "
           "inbound reserved %u",
           id_, occupancy_, mshr_capacity_, in_.size(), out_net_.size(),
           out_mem_.size(), memout_.size(), inbound_reserved_);
  return buf;
}

}  // namespace pnoc
