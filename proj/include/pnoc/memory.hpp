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
#ifndef PNOC_MEMORY_HPP_
#define PNOC_MEMORY_HPP_

#include <deque>
#include <functional>

#include "pnoc/config.hpp"
#include "pnoc/event_engine.hpp"
#include "pnoc/message.hpp"
#include "pnoc/types.hpp"

namespace pnoc {

// One per-cluster memory channel. A request serializes over the outbound
// pipe, spends a fixed access time in the DRAM stack, then its response
// serializes back over the return pipe. Both pipes are FIFO and can overlap
// with the accesses of earlier requests, so the channel streams one access
// after another at pipe rate. A queue slot is held from acceptance until the
// response has fully left the return pipe.
class MemoryController {
 public:
  MemoryController(EventEngine* engine, ClusterId id, MemoryKind kind, u32 depth);

  // Bytes per cycle on each unidirectional pipe.
  static u32 pipe_width(MemoryKind kind) {
    return kind == MemoryKind::kOcm ? 16 : 3;
  }
  static constexpr u32 kAccessCycles = 100;

  // False when every queue slot is busy; the caller should add_slot_waiter()
  // and retry when woken. Waiters are woken one per freed slot, FIFO.
  bool try_accept(Message* req);
  void add_slot_waiter(std::function<void()> fn);

  // Receives the finished response (the request object, turned around).
  void set_response_sink(std::function<void(Message*)> fn);

  u32 occupancy() const { return occupancy_; }
  u32 depth() const { return depth_; }
  u64 accepted() const { return accepted_; }
  u64 out_busy_cycles() const { return out_busy_cycles_; }
  u64 ret_busy_cycles() const { return ret_busy_cycles_; }

 private:
  void start_access(Message* req);
  void finish_access(Message* req);

  EventEngine* engine_;
  ClusterId id_;
  u32 width_;
  u32 depth_;
  std::function<void(Message*)> sink_;
  std::deque<std::function<void()>> waiters_;

  u32 occupancy_ = 0;
  u64 out_free_cycle_ = 0;
  u64 ret_free_cycle_ = 0;
  u64 accepted_ = 0;
  u64 out_busy_cycles_ = 0;
  u64 ret_busy_cycles_ = 0;
};

}  // namespace pnoc

#endif  // PNOC_MEMORY_HPP_
