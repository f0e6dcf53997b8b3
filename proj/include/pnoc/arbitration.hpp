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
#ifndef PNOC_ARBITRATION_HPP_
#define PNOC_ARBITRATION_HPP_

#include <functional>
#include <limits>
#include <vector>

#include "pnoc/event_engine.hpp"
#include "pnoc/types.hpp"

namespace pnoc {

// Distributed all-optical token arbitration. One waveguide loop passes every
// cluster position in increasing order; each token circulates at one position
// per phase (a full revolution of 64 positions takes 8 cycles). A cluster
// with a registered request diverts a passing token, which removes it from
// the loop entirely; releasing reinjects it at the holder's position, where
// it travels alongside the tail of the message just sent.
//
// Rules enforced here:
//  - a request registered at phase T can divert the token only at arrival
//    phases strictly greater than T;
//  - a reinjected token is invisible to its own injector until it has
//    traveled one full revolution, so back-to-back self-grants on an
//    uncontested token cost exactly one revolution;
//  - at most one holder per token at any instant, and the token count is
//    conserved across all state transitions.
//
// Channel token i starts in flight at position i % positions at t=0 (the
// home cluster generates its token); tokens beyond the position count (the
// broadcast token) start at position 0.
class TokenRing {
 public:
  // grant(cluster, token) fires at the capture time.
  using GrantFn = std::function<void(u32 cluster, u32 token)>;

  TokenRing(EventEngine& engine, u32 positions, u32 tokens);

  void set_grant_handler(GrantFn fn) { grant_ = std::move(fn); }

  // Registers a request; the grant handler fires when the token is diverted.
  void request(u32 cluster, u32 token);

  // Reinjects a held token at the holder's position at the current time.
  // Callers schedule this at the message tail time.
  void release(u32 cluster, u32 token);

  u32 positions() const { return positions_; }
  u32 tokens() const { return tokens_; }
  bool is_held(u32 token) const { return state_[token].held; }
  u32 holder(u32 token) const { return state_[token].holder; }
  bool is_pending(u32 cluster, u32 token) const { return state_[token].pending[cluster]; }

  // Conservation audit: held + in-flight always equals the token count.
  u32 held_count() const;
  u32 in_flight_count() const { return tokens_ - held_count(); }

  u64 grants_total() const { return grants_total_; }
  u64 grants_for(u32 cluster) const { return grants_per_cluster_[cluster]; }

 private:
  static constexpr u32 kNone = std::numeric_limits<u32>::max();

  struct TokenState {
    bool held = false;
    u32 holder = kNone;
    // In-flight trajectory: at position `pos0` at time `t0`, advancing one
    // position per phase. `injector` is blind to the token until t0 + P.
    u32 pos0 = 0;
    u64 t0 = 0;
    u32 injector = kNone;
    u64 generation = 0;
    u64 scheduled_capture = kNever;  // earliest capture event currently queued
    std::vector<u8> pending;         // per-cluster request flag
    std::vector<u64> req_phase;      // registration time, valid while pending
    u32 pending_count = 0;
  };
  static constexpr u64 kNever = std::numeric_limits<u64>::max();

  u64 capture_time(const TokenState& ts, u32 cluster) const;
  void schedule_capture(u32 token, u32 cluster, u64 at);
  void fire_capture(u32 token, u32 cluster, u64 generation);
  void scan_and_schedule(u32 token);

  EventEngine& engine_;
  u32 positions_;
  u32 tokens_;
  GrantFn grant_;
  std::vector<TokenState> state_;
  std::vector<u64> grants_per_cluster_;
  u64 grants_total_ = 0;
};

}  // namespace pnoc

#endif  // PNOC_ARBITRATION_HPP_
