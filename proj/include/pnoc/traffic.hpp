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
#ifndef PNOC_TRAFFIC_HPP_
#define PNOC_TRAFFIC_HPP_

#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "pnoc/broadcast.hpp"
#include "pnoc/cluster.hpp"
#include "pnoc/trace.hpp"

namespace pnoc {

struct DriverContext {
  EventEngine* engine = nullptr;
  std::vector<Cluster*> clusters;
  BroadcastBus* bus = nullptr;
  Stats* stats = nullptr;
  const SimConfig* cfg = nullptr;
};

// A workload: decides what each cluster asks for and when. The system calls
// back on completions and whenever an injection resource frees up.
class TrafficDriver {
 public:
  virtual ~TrafficDriver() = default;
  virtual void start() = 0;
  virtual void miss_completed(ClusterId c, u64 line,
                              std::span<const ThreadId> waiters, SimTime at) = 0;
  virtual void injector_wake(ClusterId c) = 0;
  // Empty when the workload has nothing left; anything else is treated as
  // stuck work when the event queue runs dry.
  virtual std::string idle_report() const = 0;
};

// Deterministic per-cluster address streams: every line index encodes
// (source, sequence, destination), so no two requests ever share a line and
// the low bits select the home controller.
inline u64 synth_address(ClusterId src, u64 n, ClusterId dst) {
  u64 line = ((static_cast<u64>(src) << 32 | n) << 6) | dst;
  return line * kLineBytes;
}

// Closed-loop reads: each cluster keeps up to its MSHR budget outstanding,
// issuing at most one new miss per cycle, until a global request quota is
// spent, then everything drains.
class SyntheticDriver final : public TrafficDriver {
 public:
  SyntheticDriver(const DriverContext& ctx, WorkloadKind pattern);

  void start() override;
  void miss_completed(ClusterId c, u64 line, std::span<const ThreadId> waiters,
                      SimTime at) override;
  void injector_wake(ClusterId c) override;
  std::string idle_report() const override;

  u64 issued_total() const { return issued_; }
  u64 completed_total() const { return completed_; }

 private:
  ClusterId pick_target(ClusterId src);
  void pump(ClusterId c);
  void schedule_pump(ClusterId c, u64 cycle);

  DriverContext ctx_;
  WorkloadKind pattern_;
  u64 target_;
  u32 window_;
  ClusterId hotspot_;

  struct PerCluster {
    std::mt19937_64 rng;
    u64 next_n = 0;
    u32 outstanding = 0;
    u64 last_issue_cycle = ~0ull;
    u64 pump_at = ~0ull;
    std::optional<ClusterId> pending_dst;
  };
  std::vector<PerCluster> per_;
  u64 issued_ = 0;
  u64 completed_ = 0;
};

// Synchronized epochs: every cluster sends a small burst to one rotating
// target cluster at the top of each epoch, idling in between.
class BurstyDriver final : public TrafficDriver {
 public:
  explicit BurstyDriver(const DriverContext& ctx);

  void start() override;
  void miss_completed(ClusterId c, u64 line, std::span<const ThreadId> waiters,
                      SimTime at) override;
  void injector_wake(ClusterId c) override;
  std::string idle_report() const override;

 private:
  void epoch();
  void pump(ClusterId c);
  void schedule_pump(ClusterId c, u64 cycle);

  DriverContext ctx_;
  u64 target_;
  u64 epoch_cycles_;
  u32 burst_;

  struct PerCluster {
    std::deque<ClusterId> pending;
    u64 next_n = 0;
    u64 last_issue_cycle = ~0ull;
    u64 pump_at = ~0ull;
  };
  std::vector<PerCluster> per_;
  u64 epoch_index_ = 0;
  u64 scheduled_ = 0;
  u64 issued_ = 0;
  u64 completed_ = 0;
};

// One outstanding all-cluster notification per cluster, reissued on
// completion until a global quota is spent. Exercises only the bus.
class BcastDriver final : public TrafficDriver {
 public:
  explicit BcastDriver(const DriverContext& ctx);

  void start() override;
  void miss_completed(ClusterId, u64, std::span<const ThreadId>, SimTime) override {}
  void injector_wake(ClusterId) override {}
  std::string idle_report() const override;

 private:
  void launch(ClusterId c);

  DriverContext ctx_;
  u64 target_;
  u64 issued_ = 0;
  u64 completed_ = 0;
  std::vector<SimTime> started_;  // per cluster, current broadcast
};

// Replays per-thread access streams with think-time gaps and global
// barriers. A thread blocks on each of its misses (merged misses share one
// entry) and at each barrier until every thread has arrived.
class TraceDriver final : public TrafficDriver {
 public:
  TraceDriver(const DriverContext& ctx, TraceFile trace);

  void start() override;
  void miss_completed(ClusterId c, u64 line, std::span<const ThreadId> waiters,
                      SimTime at) override;
  void injector_wake(ClusterId c) override;
  std::string idle_report() const override;

  u64 barriers_released() const { return releases_; }

 private:
  enum class St : u8 { kRunning, kBlockedMiss, kBlockedBarrier, kStalled, kDone };

  struct Thread {
    ThreadId tid = 0;
    const ThreadTrace* trace = nullptr;
    u32 idx = 0;
    St st = St::kRunning;
  };

  struct Barrier {
    u32 arrived = 0;
    std::vector<u32> waiting;  // indices into threads_
  };

  void schedule_record(u32 t, SimTime done_at);
  void perform(u32 t);
  void finish_record(u32 t, SimTime at);
  void release_ideal(Barrier& b);

  DriverContext ctx_;
  TraceFile trace_;
  BarrierMode barrier_mode_;
  std::vector<Thread> threads_;
  std::unordered_map<ThreadId, u32> by_tid_;
  std::unordered_map<u32, Barrier> barriers_;
  std::unordered_map<u64, std::vector<u32>> bus_pending_;  // tag -> waiting
  std::vector<std::deque<u32>> stalled_;  // per cluster, FIFO of thread idx
  u64 bus_tag_ = 0;
  u64 releases_ = 0;
  u64 done_count_ = 0;
};

// Scripted single misses at fixed times; used to measure unloaded paths.
class ProbeDriver final : public TrafficDriver {
 public:
  struct Probe {
    SimTime at;
    ClusterId src = 0;
    u64 address = 0;
    MessageKind kind = MessageKind::kReadReq;
  };
  struct Result {
    u64 line = 0;
    SimTime completed{};
  };

  ProbeDriver(const DriverContext& ctx, std::vector<Probe> probes);

  void start() override;
  void miss_completed(ClusterId c, u64 line, std::span<const ThreadId> waiters,
                      SimTime at) override;
  void injector_wake(ClusterId) override {}
  std::string idle_report() const override;

  const std::vector<Result>& results() const { return results_; }

 private:
  DriverContext ctx_;
  std::vector<Probe> probes_;
  std::vector<Result> results_;
  u64 outstanding_ = 0;
};

std::unique_ptr<TrafficDriver> make_driver(const DriverContext& ctx);

}  // namespace pnoc

#endif  // PNOC_TRAFFIC_HPP_
