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
#include <doctest.h>

#include <array>
#include <functional>
#include <vector>

#include "pnoc/cluster.hpp"
#include "pnoc/event_engine.hpp"
#include "pnoc/memory.hpp"
#include "pnoc/metrics.hpp"

using namespace pnoc;

TEST_SUITE_BEGIN("cluster");

namespace {

struct FakeNetwork final : Network {
  struct Sent {
    u64 cycle;
    Message* m;
    MessageKind kind;
    ClusterId src, dst;
  };
  explicit FakeNetwork(EventEngine* engine) : e(engine) {}
  bool try_send(Message* m) override {
    if (!accept) return false;
    sent.push_back({e->now().cycle(), m, m->kind, m->src, m->dst});
    return true;
  }
  void set_inject_space_handler(ClusterId c, std::function<void()> fn) override {
    space[c] = std::move(fn);
  }
  EventEngine* e;
  bool accept = true;
  std::vector<Sent> sent;
  std::array<std::function<void()>, kClusters> space{};
};

struct Rig {
  explicit Rig(const SimConfig& cfg, ClusterId id = 0,
               MemoryKind mk = MemoryKind::kOcm)
      : net(&e), mem(&e, id, mk, cfg.mem_queue_depth), cl(&e, id, cfg, &stats) {
    cl.connect(&net, &mem);
  }
  EventEngine e;
  Stats stats;
  FakeNetwork net;
  MemoryController mem;
  Cluster cl;
};

u64 addr_for(ClusterId ctrl, u64 n = 0) { return (n * kClusters + ctrl) * kLineBytes; }

}  // namespace

TEST_CASE("a local-controller miss completes in 108 cycles") {
  SimConfig cfg;
  Rig r(cfg);
  u64 done = 0, line = 0;
  std::vector<ThreadId> waiters;
  r.cl.set_completion_handler(
      [&](ClusterId c, u64 l, std::span<const ThreadId> w, SimTime at) {
        CHECK(c == 0);
        line = l;
        waiters.assign(w.begin(), w.end());
        done = at.cycle();
      });
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(0, 3), 11) ==
          Cluster::Issue::kAccepted);
  });
  r.e.run();
  // One hub cycle out, 106 in the memory module, one hub cycle back.
  CHECK(done == 108);
  CHECK(line == addr_for(0, 3) / kLineBytes);
  CHECK(waiters == std::vector<ThreadId>{11});
  CHECK(r.cl.outstanding() == 0);
  CHECK(r.stats.transactions_completed == 1);
  CHECK(r.stats.latency_samples == 1);
  CHECK(r.stats.payload_bytes == kLineBytes);
  CHECK(r.stats.message_hops == 0);  // src and controller coincide
  CHECK(r.net.sent.empty());
}

TEST_CASE("remote misses leave through the interconnect port at one per cycle") {
  SimConfig cfg;
  Rig r(cfg);
  r.e.schedule(SimTime::cycles(0), [&] {
    for (u64 n = 0; n < 5; ++n) {
      CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(7, n), 0) ==
            Cluster::Issue::kAccepted);
    }
  });
  r.e.run_until(SimTime::cycles(20));
  REQUIRE(r.net.sent.size() == 5);
  for (u64 n = 0; n < 5; ++n) {
    CHECK(r.net.sent[n].cycle == n + 1);  // one hub cycle, then paced 1/cycle
    CHECK(r.net.sent[n].kind == MessageKind::kReadReq);
    CHECK(r.net.sent[n].src == 0);
    CHECK(r.net.sent[n].dst == 7);
    CHECK(r.net.sent[n].m->injected.cycle() == n + 1);
  }
}

TEST_CASE("same-line misses merge onto one transaction") {
  SimConfig cfg;
  Rig r(cfg);
  std::vector<ThreadId> waiters;
  u64 done = 0;
  r.cl.set_completion_handler(
      [&](ClusterId, u64, std::span<const ThreadId> w, SimTime at) {
        waiters.assign(w.begin(), w.end());
        done = at.cycle();
      });
  u64 addr = addr_for(9);
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr, 3) == Cluster::Issue::kAccepted);
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr + 8, 9) ==
          Cluster::Issue::kMerged);  // same line, different offset
    // A write to the same line is a separate transaction, not a merge.
    CHECK(r.cl.issue_miss(MessageKind::kWriteReq, addr, 4) == Cluster::Issue::kAccepted);
  });
  // Play the remote controller for the read: turn the message around.
  r.e.schedule(SimTime::cycles(40), [&] {
    REQUIRE(r.net.sent.size() >= 1);
    Message* m = r.net.sent[0].m;
    m->kind = response_for(m->kind);
    std::swap(m->src, m->dst);
    REQUIRE(r.cl.try_reserve_inbound());
    r.cl.deliver_reserved(m);
  });
  r.e.run_until(SimTime::cycles(60));
  CHECK(r.stats.mshr_merges == 1);
  CHECK(done == 41);  // one hub cycle after delivery
  CHECK(waiters == std::vector<ThreadId>{3, 9});
  CHECK(r.cl.outstanding() == 1);  // the write is still out
  CHECK(r.stats.message_hops == 2 * manhattan_hops(0, 9));
}

TEST_CASE("exhausted MSHRs stall and the completion wakes the injector") {
  SimConfig cfg;
  cfg.mshr_capacity = 2;
  Rig r(cfg);
  int wakes = 0;
  r.cl.set_injector_wake([&] { ++wakes; });
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(3, 0), 0) ==
          Cluster::Issue::kAccepted);
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(3, 1), 0) ==
          Cluster::Issue::kAccepted);
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(3, 2), 0) ==
          Cluster::Issue::kStall);
  });
  r.e.schedule(SimTime::cycles(30), [&] {
    REQUIRE(r.net.sent.size() == 2);
    Message* m = r.net.sent[0].m;
    m->kind = response_for(m->kind);
    std::swap(m->src, m->dst);
    REQUIRE(r.cl.try_reserve_inbound());
    r.cl.deliver_reserved(m);
  });
  r.e.run_until(SimTime::cycles(40));
  CHECK(wakes >= 1);
  CHECK(r.cl.outstanding() == 1);
  r.e.schedule(SimTime::cycles(40), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(3, 2), 0) ==
          Cluster::Issue::kAccepted);
  });
  r.e.run_until(SimTime::cycles(41));
}

TEST_CASE("a full interconnect queue stalls further misses without burning MSHRs") {
  SimConfig cfg;
  cfg.hub_queue_depth = 2;
  Rig r(cfg);
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(5, 0), 0) ==
          Cluster::Issue::kAccepted);
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(5, 1), 0) ==
          Cluster::Issue::kAccepted);
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(5, 2), 0) ==
          Cluster::Issue::kStall);
    CHECK(r.cl.outstanding() == 2);
  });
  r.e.run_until(SimTime::cycles(10));
  CHECK(r.net.sent.size() == 2);
}

TEST_CASE("inbound reservations cap hub occupancy and waiters recover slots") {
  SimConfig cfg;
  cfg.hub_queue_depth = 2;
  Rig r(cfg);
  std::vector<u64> wake_cycles;
  Message remote;
  remote.kind = MessageKind::kReadReq;
  remote.src = 3;
  remote.dst = 0;
  remote.address = addr_for(0);
  remote.transaction = 0;
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.try_reserve_inbound());
    CHECK(r.cl.try_reserve_inbound());
    CHECK_FALSE(r.cl.try_reserve_inbound());  // pool of 2 exhausted
    r.cl.add_inbound_waiter([&] { wake_cycles.push_back(r.e.now().cycle()); });
    r.cl.deliver_reserved(&remote);
  });
  r.e.run_until(SimTime::cycles(5));
  // The delivered request moved to the controller at cycle 1, freeing a slot.
  REQUIRE(wake_cycles.size() == 1);
  CHECK(wake_cycles[0] == 1);
  CHECK(r.stats.messages_delivered == 1);
}

TEST_CASE("controller responses for remote requesters return to the network") {
  SimConfig cfg;
  Rig r(cfg);
  Message remote;
  remote.kind = MessageKind::kReadReq;
  remote.src = 3;
  remote.dst = 0;
  remote.address = addr_for(0);
  remote.transaction = 42;
  r.e.schedule(SimTime::cycles(0), [&] {
    REQUIRE(r.cl.try_reserve_inbound());
    r.cl.deliver_reserved(&remote);
  });
  r.e.run_until(SimTime::cycles(120));
  // One hub cycle in, 106 in the memory module, one hub cycle out.
  REQUIRE(r.net.sent.size() == 1);
  CHECK(r.net.sent[0].cycle == 108);
  CHECK(r.net.sent[0].kind == MessageKind::kReadResp);
  CHECK(r.net.sent[0].src == 0);
  CHECK(r.net.sent[0].dst == 3);
  CHECK(r.net.sent[0].m->transaction == 42);
  CHECK(r.stats.transactions_completed == 0);  // requester's count, not ours
}

TEST_CASE("network backpressure holds the message until space returns") {
  SimConfig cfg;
  Rig r(cfg);
  r.net.accept = false;
  r.e.schedule(SimTime::cycles(0), [&] {
    CHECK(r.cl.issue_miss(MessageKind::kReadReq, addr_for(7), 0) ==
          Cluster::Issue::kAccepted);
  });
  r.e.schedule(SimTime::cycles(10), [&] {
    r.net.accept = true;
    r.net.space[0]();  // the port signals that space freed up
  });
  r.e.run_until(SimTime::cycles(15));
  REQUIRE(r.net.sent.size() == 1);
  CHECK(r.net.sent[0].cycle == 10);
}

TEST_SUITE_END();
