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
#include "pnoc/arbitration.hpp"

#include <cassert>
#include <stdexcept>

namespace pnoc {

TokenRing::TokenRing(EventEngine& engine, u32 positions, u32 tokens)
    : engine_(engine), positions_(positions), tokens_(tokens) {
  state_.resize(tokens_);
  for (u32 t = 0; t < tokens_; ++t) {
    TokenState& ts = state_[t];
    ts.pos0 = t < positions_ ? t : 0;
    ts.t0 = 0;
    ts.pending.assign(positions_, 0);
    ts.req_phase.assign(positions_, 0);
  }
  grants_per_cluster_.assign(positions_, 0);
}

u32 TokenRing::held_count() const {
  u32 n = 0;
  for (const TokenState& ts : state_) n += ts.held ? 1 : 0;
  return n;
}

// Earliest phase at which `cluster` may divert the token, honoring the
// strictly-later-than-registration rule and the injector blind revolution.
u64 TokenRing::capture_time(const TokenState& ts, u32 cluster) const {
  assert(!ts.held);
  u64 offset = (cluster + positions_ - ts.pos0 % positions_) % positions_;
  u64 arrival = ts.t0 + offset;  // first pass of the loop at this cluster
  u64 lo = ts.req_phase[cluster] + 1;
  if (cluster == ts.injector && ts.t0 + positions_ > lo) lo = ts.t0 + positions_;
  if (arrival < lo) {
    u64 revolutions = (lo - arrival + positions_ - 1) / positions_;
    arrival += revolutions * positions_;
  }
  return arrival;
}

void TokenRing::schedule_capture(u32 token, u32 cluster, u64 at) {
  TokenState& ts = state_[token];
  ts.scheduled_capture = at;
  u64 generation = ts.generation;
  engine_.schedule(SimTime(at), [this, token, cluster, generation] {
    fire_capture(token, cluster, generation);
  });
}

void TokenRing::fire_capture(u32 token, u32 cluster, u64 generation) {
  TokenState& ts = state_[token];
  if (ts.generation != generation || ts.held || !ts.pending[cluster]) {
    return;  // stale: the token moved on since this event was queued
  }
  ts.held = true;
  ts.holder = cluster;
  ts.pending[cluster] = 0;
  --ts.pending_count;
  ++ts.generation;
  ts.scheduled_capture = kNever;
  ++grants_total_;
  ++grants_per_cluster_[cluster];
  if (grant_) grant_(cluster, token);
}

void TokenRing::scan_and_schedule(u32 token) {
  TokenState& ts = state_[token];
  if (ts.held || ts.pending_count == 0) return;
  u64 best = kNever;
  u32 best_cluster = kNone;
  for (u32 c = 0; c < positions_; ++c) {
    if (!ts.pending[c]) continue;
    u64 at = capture_time(ts, c);
    if (at < best) {
      best = at;
      best_cluster = c;
    }
  }
  assert(best_cluster != kNone);
  schedule_capture(token, best_cluster, best);
}

void TokenRing::request(u32 cluster, u32 token) {
  if (cluster >= positions_ || token >= tokens_) {
    throw std::logic_error("token request out of range");
  }
  TokenState& ts = state_[token];
  if (ts.held && ts.holder == cluster) {
    throw std::logic_error("cluster " + std::to_string(cluster) +
                           " requested token " + std::to_string(token) +
                           " it already holds");
  }
  if (ts.pending[cluster]) {
    throw std::logic_error("duplicate token request: cluster " + std::to_string(cluster) +
                           " token " + std::to_string(token));
  }
  ts.pending[cluster] = 1;
  ts.req_phase[cluster] = engine_.now().phases;
  ++ts.pending_count;
  if (!ts.held) {
    u64 at = capture_time(ts, cluster);
    if (at < ts.scheduled_capture) schedule_capture(token, cluster, at);
  }
}

void TokenRing::release(u32 cluster, u32 token) {
  TokenState& ts = state_[token];
  if (!ts.held || ts.holder != cluster) {
    throw std::logic_error("release of token " + std::to_string(token) +
                           " by non-holder " + std::to_string(cluster));
  }
  ts.held = false;
  ts.holder = kNone;
  ts.pos0 = cluster;
  ts.t0 = engine_.now().phases;
  ts.injector = cluster;
  ++ts.generation;
  ts.scheduled_capture = kNever;
  scan_and_schedule(token);
}

}  // namespace pnoc
