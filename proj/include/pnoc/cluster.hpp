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
#ifndef PNOC_CLUSTER_HPP_
#define PNOC_CLUSTER_HPP_

#include <deque>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pnoc/config.hpp"
#include "pnoc/event_engine.hpp"
#include "pnoc/memory.hpp"
#include "pnoc/message.hpp"
#include "pnoc/metrics.hpp"
#include "pnoc/types.hpp"

namespace pnoc {

// Data interconnect between cluster hubs. Requests may be refused while the
// injection queue is full; the hub retries after the per-cluster space
// handler fires. Responses are always taken so the memory pipeline never
// stalls on the network (that keeps request/response flows free of circular
// waits with a single traffic class).
class Network {
 public:
  virtual ~Network() = default;
  virtual bool try_send(Message* m) = 0;
  virtual void set_inject_space_handler(ClusterId c, std::function<void()> fn) = 0;
};

// A hub port: FIFO queue serviced at one message per cycle with one cycle of
// latency. When the sink refuses the head, the queue parks until retry().
class ServiceQueue {
 public:
  // capacity 0 means unbounded.
  ServiceQueue(EventEngine* engine, u32 capacity)
      : engine_(engine), cap_(capacity) {}

  void set_sink(std::function<bool(Message*)> fn) { sink_ = std::move(fn); }
  void set_space_handler(std::function<void()> fn) { space_ = std::move(fn); }

  bool full() const { return cap_ != 0 && q_.size() >= cap_; }
  bool empty() const { return q_.empty(); }
  size_t size() const { return q_.size(); }

  void push(Message* m) {
    if (full()) throw std::logic_error("push into full hub queue");
    q_.push_back(m);
    if (!waiting_ && !pending_) {
      schedule(std::max(engine_->now().cycle() + 1, next_allowed_));
    }
  }

  // The refusing sink has room again; re-attempt the head now. Retries can
  // originate mid-cycle (optical events), so round up to the cycle edge.
  void retry() {
    if (!waiting_) return;
    waiting_ = false;
    if (!pending_) {
      schedule(std::max(engine_->now().ceil_cycle().cycle(), next_allowed_));
    }
  }

 private:
  void schedule(u64 cycle) {
    pending_ = true;
    engine_->schedule(SimTime::cycles(cycle), [this] { dispatch(); });
  }

  void dispatch() {
    pending_ = false;
    if (q_.empty()) return;
    if (sink_(q_.front())) {
      q_.pop_front();
      next_allowed_ = engine_->now().cycle() + 1;
      if (space_) space_();  // may push and schedule the next dispatch itself
      if (!q_.empty() && !pending_) schedule(next_allowed_);
    } else {
      waiting_ = true;
    }
  }

  EventEngine* engine_;
  u32 cap_;
  std::function<bool(Message*)> sink_;
  std::function<void()> space_;
  std::deque<Message*> q_;
  u64 next_allowed_ = 0;
  bool pending_ = false;
  bool waiting_ = false;
};

// A cluster: the miss-tracking MSHR file, the hub that moves messages
// between the injector, the network and the local memory channel, and the
// inbound slot pool that backs network-level flow control.
class Cluster {
 public:
  enum class Issue { kAccepted, kMerged, kStall };

  using CompletionFn =
      std::function<void(ClusterId, u64 line, std::span<const ThreadId>, SimTime)>;

  Cluster(EventEngine* engine, ClusterId id, const SimConfig& cfg, Stats* stats);

  void connect(Network* net, MemoryController* mem);
  void set_completion_handler(CompletionFn fn) { on_complete_ = std::move(fn); }
  void set_injector_wake(std::function<void()> fn) { injector_wake_ = std::move(fn); }

  // Injector side. kStall means either no MSHR slot or no hub slot; the
  // injector wake handler fires whenever one of those frees up.
  Issue issue_miss(MessageKind kind, u64 address, ThreadId waiter);

  // Network side. A delivery needs a reservation taken beforehand; waiters
  // are granted freed slots in FIFO order (the callback conveys ownership).
  bool try_reserve_inbound();
  void add_inbound_waiter(std::function<void()> fn);
  void deliver_reserved(Message* m);

  ClusterId id() const { return id_; }
  u32 outstanding() const { return occupancy_; }
  u64 issued() const { return issued_; }
  std::string blocked_report() const;

 private:
  struct MshrEntry {
    u64 line = 0;
    MessageKind kind = MessageKind::kReadReq;
    SimTime created{};
    std::vector<ThreadId> waiters;
  };

  Message* alloc_message();
  void recycle(Message* m);
  void complete(Message* resp);
  bool sink_in(Message* m);
  bool sink_out_net(Message* m);
  bool sink_out_mem(Message* m);
  bool sink_memout(Message* m);
  void grant_next_inbound();

  EventEngine* engine_;
  ClusterId id_;
  Stats* stats_;
  u32 mshr_capacity_;
  u32 hub_depth_;

  Network* net_ = nullptr;
  MemoryController* mem_ = nullptr;
  CompletionFn on_complete_;
  std::function<void()> injector_wake_;

  ServiceQueue in_;       // network deliveries -> memory or MSHR
  ServiceQueue out_net_;  // new remote requests -> network
  ServiceQueue out_mem_;  // new local requests -> memory channel
  ServiceQueue memout_;   // memory responses -> network or MSHR

  std::vector<MshrEntry> entries_;
  std::vector<u32> free_entries_;
  std::unordered_map<u64, u32> index_;  // (line << 1 | is_write) -> entry
  u32 occupancy_ = 0;
  u64 issued_ = 0;

  u32 inbound_reserved_ = 0;
  std::deque<std::function<void()>> inbound_waiters_;

  std::deque<Message> message_storage_;
  std::vector<Message*> message_pool_;
};

}  // namespace pnoc

#endif  // PNOC_CLUSTER_HPP_
