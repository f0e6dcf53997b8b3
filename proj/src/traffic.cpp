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
#include "pnoc/traffic.hpp"

#include <cstdio>

namespace pnoc {

namespace {

// splitmix64: decorrelates per-cluster streams from one base seed.
u64 mix_seed(u64 seed, u64 salt) {
  u64 z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// SyntheticDriver

SyntheticDriver::SyntheticDriver(const DriverContext& ctx, WorkloadKind pattern)
    : ctx_(ctx),
      pattern_(pattern),
      target_(ctx.cfg->request_target),
      window_(ctx.cfg->mshr_capacity),
      hotspot_(ctx.cfg->hotspot_target),
      per_(kClusters) {
  for (ClusterId c = 0; c < kClusters; ++c) {
    per_[c].rng.seed(mix_seed(ctx.cfg->seed, c));
  }
}

ClusterId SyntheticDriver::pick_target(ClusterId src) {
  switch (pattern_) {
    case WorkloadKind::kUniform:
      // 64 divides 2^64, so the modulus is exactly uniform.
      return static_cast<ClusterId>(per_[src].rng() % kClusters);
    case WorkloadKind::kHotspot:
      return hotspot_;
    case WorkloadKind::kTornado:
      return cluster_at((grid_row(src) + kGridDim / 2 - 1) % kGridDim,
                        (grid_col(src) + kGridDim / 2 - 1) % kGridDim);
    case WorkloadKind::kTranspose:
      return cluster_at(grid_col(src), grid_row(src));
    default:
      throw std::logic_error("not a synthetic pattern");
  }
}

void SyntheticDriver::start() {
  for (ClusterId c = 0; c < kClusters; ++c) schedule_pump(c, 0);
}

void SyntheticDriver::schedule_pump(ClusterId c, u64 cycle) {
  if (per_[c].pump_at == cycle) return;
  per_[c].pump_at = cycle;
  ctx_.engine->schedule(SimTime::cycles(cycle), [this, c] {
    per_[c].pump_at = ~0ull;
    pump(c);
  });
}

void SyntheticDriver::pump(ClusterId c) {
  PerCluster& pc = per_[c];
  if (issued_ >= target_) return;
  if (pc.outstanding >= window_) return;
  u64 now = ctx_.engine->now().cycle();
  if (pc.last_issue_cycle != ~0ull && now <= pc.last_issue_cycle) {
    schedule_pump(c, pc.last_issue_cycle + 1);
    return;
  }
  ClusterId dst = pc.pending_dst ? *pc.pending_dst : pick_target(c);
  u64 addr = synth_address(c, pc.next_n, dst);
  Cluster::Issue r = ctx_.clusters[c]->issue_miss(
      MessageKind::kReadReq, addr, static_cast<ThreadId>(c * kThreadsPerCluster));
  if (r == Cluster::Issue::kStall) {
    pc.pending_dst = dst;  // keep the draw so wake order can't change the stream
    return;
  }
  if (r == Cluster::Issue::kMerged) throw std::logic_error("synthetic lines collided");
  pc.pending_dst.reset();
  ++pc.next_n;
  ++pc.outstanding;
  ++issued_;
  pc.last_issue_cycle = now;
  if (issued_ < target_ && pc.outstanding < window_) schedule_pump(c, now + 1);
}

void SyntheticDriver::miss_completed(ClusterId c, u64, std::span<const ThreadId> waiters,
                                     SimTime) {
  per_[c].outstanding -= static_cast<u32>(waiters.size());
  completed_ += waiters.size();
  pump(c);
}

void SyntheticDriver::injector_wake(ClusterId c) { pump(c); }

std::string SyntheticDriver::idle_report() const {
  if (completed_ == target_) return "";
  char buf[96];
  snprintf(buf, sizeof(buf), "synthetic: %llu issued, %llu completed of %llu",
           static_cast<unsigned long long>(issued_),
           static_cast<unsigned long long>(completed_),
           static_cast<unsigned long long>(target_));
  return buf;
}

// ---------------------------------------------------------------------------
// BurstyDriver

BurstyDriver::BurstyDriver(const DriverContext& ctx)
    : ctx_(ctx),
      target_(ctx.cfg->request_target),
      epoch_cycles_(ctx.cfg->burst_epoch_cycles),
      burst_(ctx.cfg->burst_size),
      per_(kClusters) {}

void BurstyDriver::start() {
  ctx_.engine->schedule(SimTime::cycles(0), [this] { epoch(); });
}

void BurstyDriver::epoch() {
  auto dst = static_cast<ClusterId>(epoch_index_ % kClusters);
  for (ClusterId c = 0; c < kClusters && scheduled_ < target_; ++c) {
    for (u32 i = 0; i < burst_ && scheduled_ < target_; ++i) {
      per_[c].pending.push_back(dst);
      ++scheduled_;
    }
    pump(c);
  }
  ++epoch_index_;
  if (scheduled_ < target_) {
    ctx_.engine->schedule(SimTime::cycles(epoch_index_ * epoch_cycles_),
                          [this] { epoch(); });
  }
}

void BurstyDriver::schedule_pump(ClusterId c, u64 cycle) {
  if (per_[c].pump_at == cycle) return;
  per_[c].pump_at = cycle;
  ctx_.engine->schedule(SimTime::cycles(cycle), [this, c] {
    per_[c].pump_at = ~0ull;
    pump(c);
  });
}

void BurstyDriver::pump(ClusterId c) {
  PerCluster& pc = per_[c];
  if (pc.pending.empty()) return;
  u64 now = ctx_.engine->now().cycle();
  if (pc.last_issue_cycle != ~0ull && now <= pc.last_issue_cycle) {
    schedule_pump(c, pc.last_issue_cycle + 1);
    return;
  }
  ClusterId dst = pc.pending.front();
  u64 addr = synth_address(c, pc.next_n, dst);
  Cluster::Issue r = ctx_.clusters[c]->issue_miss(
      MessageKind::kReadReq, addr, static_cast<ThreadId>(c * kThreadsPerCluster));
  if (r == Cluster::Issue::kStall) return;
  if (r == Cluster::Issue::kMerged) throw std::logic_error("bursty lines collided");
  pc.pending.pop_front();
  ++pc.next_n;
  ++issued_;
  pc.last_issue_cycle = now;
  if (!pc.pending.empty()) schedule_pump(c, now + 1);
}

void BurstyDriver::miss_completed(ClusterId c, u64, std::span<const ThreadId> waiters,
                                  SimTime) {
  completed_ += waiters.size();
  pump(c);
}

void BurstyDriver::injector_wake(ClusterId c) { pump(c); }

std::string BurstyDriver::idle_report() const {
  if (completed_ == target_) return "";
  char buf[96];
  snprintf(buf, sizeof(buf), "bursty: %llu issued, %llu completed of %llu",
           static_cast<unsigned long long>(issued_),
           static_cast<unsigned long long>(completed_),
           static_cast<unsigned long long>(target_));
  return buf;
}

// ---------------------------------------------------------------------------
// BcastDriver

BcastDriver::BcastDriver(const DriverContext& ctx)
    : ctx_(ctx), target_(ctx.cfg->request_target), started_(kClusters) {
  ctx_.bus->set_complete_handler([this](u64 tag, ClusterId src, SimTime at) {
    ++completed_;
    double ns = (at - started_[src]).ns();
    ctx_.stats->latency_ns_sum += ns;
    ++ctx_.stats->latency_samples;
    ctx_.stats->histogram.add(ns);
    (void)tag;
    if (issued_ < target_) launch(src);
  });
}

void BcastDriver::start() {
  ctx_.engine->schedule(SimTime::cycles(0), [this] {
    for (ClusterId c = 0; c < kClusters && issued_ < target_; ++c) launch(c);
  });
}

void BcastDriver::launch(ClusterId c) {
  ++issued_;
  started_[c] = ctx_.engine->now();
  ctx_.bus->broadcast(c, issued_);
}

std::string BcastDriver::idle_report() const {
  if (completed_ == issued_ && issued_ >= std::min<u64>(target_, kClusters)) return "";
  char buf[96];
  snprintf(buf, sizeof(buf), "bcast: %llu issued, %llu completed of %llu",
           static_cast<unsigned long long>(issued_),
           static_cast<unsigned long long>(completed_),
           static_cast<unsigned long long>(target_));
  return buf;
}

// ---------------------------------------------------------------------------
// TraceDriver

TraceDriver::TraceDriver(const DriverContext& ctx, TraceFile trace)
    : ctx_(ctx),
      trace_(std::move(trace)),
      barrier_mode_(ctx.cfg->barrier_mode),
      stalled_(kClusters) {
  threads_.reserve(trace_.threads.size());
  for (const ThreadTrace& tt : trace_.threads) {
    by_tid_.emplace(tt.thread, static_cast<u32>(threads_.size()));
    threads_.push_back(Thread{tt.thread, &tt, 0, St::kRunning});
  }
  if (barrier_mode_ == BarrierMode::kBus) {
    ctx_.bus->set_delivery_handler([this](ClusterId receiver, u64 tag, SimTime at) {
      auto it = bus_pending_.find(tag);
      if (it == bus_pending_.end()) return;
      auto& waiting = it->second;
      for (size_t i = 0; i < waiting.size();) {
        u32 t = waiting[i];
        if (home_cluster(threads_[t].tid) == receiver) {
          waiting[i] = waiting.back();
          waiting.pop_back();
          finish_record(t, at);
        } else {
          ++i;
        }
      }
      if (waiting.empty()) bus_pending_.erase(it);
    });
  }
}

void TraceDriver::start() {
  for (u32 t = 0; t < threads_.size(); ++t) schedule_record(t, SimTime::cycles(0));
}

// The previous record finished at done_at; the next one runs after its gap.
void TraceDriver::schedule_record(u32 t, SimTime done_at) {
  Thread& th = threads_[t];
  if (th.idx >= th.trace->records.size()) {
    th.st = St::kDone;
    ++done_count_;
    return;
  }
  th.st = St::kRunning;
  const TraceRecord& rec = th.trace->records[th.idx];
  SimTime at = done_at.ceil_cycle() + SimTime::cycles(rec.gap_cycles);
  ctx_.engine->schedule(at, [this, t] { perform(t); });
}

void TraceDriver::perform(u32 t) {
  Thread& th = threads_[t];
  const TraceRecord& rec = th.trace->records[th.idx];
  ClusterId c = home_cluster(th.tid);

  if (rec.op == TraceRecord::Op::kBarrier) {
    th.st = St::kBlockedBarrier;
    Barrier& b = barriers_[rec.barrier];
    b.waiting.push_back(t);
    if (++b.arrived == threads_.size()) {
      Barrier done = std::move(b);
      barriers_.erase(rec.barrier);
      ++releases_;
      ++ctx_.stats->barriers_released;
      if (barrier_mode_ == BarrierMode::kIdeal) {
        release_ideal(done);
      } else {
        u64 tag = ++bus_tag_;
        bus_pending_.emplace(tag, std::move(done.waiting));
        ctx_.bus->broadcast(c, tag);
      }
    }
    return;
  }

  MessageKind kind = rec.op == TraceRecord::Op::kRead ? MessageKind::kReadReq
                                                      : MessageKind::kWriteReq;
  Cluster::Issue r = ctx_.clusters[c]->issue_miss(kind, rec.address, th.tid);
  if (r == Cluster::Issue::kStall) {
    th.st = St::kStalled;
    stalled_[c].push_back(t);
    return;
  }
  th.st = St::kBlockedMiss;
}

void TraceDriver::finish_record(u32 t, SimTime at) {
  Thread& th = threads_[t];
  ++th.idx;
  schedule_record(t, at);
}

void TraceDriver::release_ideal(Barrier& b) {
  SimTime now = ctx_.engine->now();
  for (u32 t : b.waiting) finish_record(t, now);
}

void TraceDriver::miss_completed(ClusterId, u64, std::span<const ThreadId> waiters,
                                 SimTime at) {
  for (ThreadId tid : waiters) {
    auto it = by_tid_.find(tid);
    if (it == by_tid_.end()) throw std::logic_error("completion for unknown thread");
    finish_record(it->second, at);
  }
}

void TraceDriver::injector_wake(ClusterId c) {
  auto& q = stalled_[c];
  while (!q.empty()) {
    u32 t = q.front();
    q.pop_front();
    perform(t);
    if (threads_[t].st == St::kStalled) {
      // perform() re-queued it at the back; restore FIFO order and stop.
      q.pop_back();
      q.push_front(t);
      break;
    }
  }
}

std::string TraceDriver::idle_report() const {
  if (done_count_ == threads_.size()) return "";
  u32 miss = 0, barrier = 0, stalled = 0, running = 0;
  for (const Thread& th : threads_) {
    switch (th.st) {
      case St::kBlockedMiss: ++miss; break;
      case St::kBlockedBarrier: ++barrier; break;
      case St::kStalled: ++stalled; break;
      case St::kRunning: ++running; break;
      case St::kDone: break;
    }
  }
  char buf[160];
  snprintf(buf, sizeof(buf),
           "trace: %llu/%zu threads done (%u on misses, %u at barriers, %u stalled, "
           "%u scheduled)",
           static_cast<unsigned long long>(done_count_), threads_.size(), miss,
           barrier, stalled, running);
  return buf;
}

// ---------------------------------------------------------------------------
// ProbeDriver

ProbeDriver::ProbeDriver(const DriverContext& ctx, std::vector<Probe> probes)
    : ctx_(ctx), probes_(std::move(probes)) {}

void ProbeDriver::start() {
  for (const Probe& p : probes_) {
    ++outstanding_;
    ctx_.engine->schedule(p.at, [this, p] {
      Cluster::Issue r = ctx_.clusters[p.src]->issue_miss(p.kind, p.address, 0);
      if (r != Cluster::Issue::kAccepted) throw std::logic_error("probe not accepted");
    });
  }
}

void ProbeDriver::miss_completed(ClusterId, u64 line, std::span<const ThreadId>,
                                 SimTime at) {
  results_.push_back(Result{line, at});
  --outstanding_;
}

std::string ProbeDriver::idle_report() const {
  return outstanding_ == 0 ? "" : "probe: incomplete";
}

// ---------------------------------------------------------------------------

std::unique_ptr<TrafficDriver> make_driver(const DriverContext& ctx) {
  switch (ctx.cfg->workload) {
    case WorkloadKind::kUniform:
    case WorkloadKind::kHotspot:
    case WorkloadKind::kTornado:
    case WorkloadKind::kTranspose:
      return std::make_unique<SyntheticDriver>(ctx, ctx.cfg->workload);
    case WorkloadKind::kBursty:
      return std::make_unique<BurstyDriver>(ctx);
    case WorkloadKind::kBcast:
      return std::make_unique<BcastDriver>(ctx);
    case WorkloadKind::kTrace:
      return std::make_unique<TraceDriver>(ctx, load_trace(ctx.cfg->trace_path));
  }
  throw ConfigError("no driver for workload");
}

}  // namespace pnoc
