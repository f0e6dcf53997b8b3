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
#include "pnoc/memory.hpp"

namespace pnoc {

MemoryController::MemoryController(EventEngine* engine, ClusterId id,
                                   MemoryKind kind, u32 depth)
    : engine_(engine), id_(id), width_(pipe_width(kind)), depth_(depth) {}

bool MemoryController::try_accept(Message* req) {
  if (occupancy_ == depth_) return false;
  if (!is_request(req->kind)) throw std::logic_error("memory got a non-request");
  if (req->dst != id_) throw std::logic_error("request routed to wrong controller");
  ++occupancy_;
  ++accepted_;
  start_access(req);
  return true;
}

void MemoryController::add_slot_waiter(std::function<void()> fn) {
  waiters_.push_back(std::move(fn));
}

void MemoryController::set_response_sink(std::function<void(Message*)> fn) {
  sink_ = std::move(fn);
}

void MemoryController::start_access(Message* req) {
  u64 now = engine_->now().cycle();
  u64 start = std::max(now, out_free_cycle_);
  u64 ser = ceil_div(req->size_bytes(), width_);
  out_free_cycle_ = start + ser;
  out_busy_cycles_ += ser;
  u64 access_done = out_free_cycle_ + kAccessCycles;
  engine_->schedule(SimTime::cycles(access_done),
                    [this, req] { finish_access(req); });
}

void MemoryController::finish_access(Message* req) {
  // Turn the request around in place; the transaction id rides along.
  req->kind = response_for(req->kind);
  std::swap(req->src, req->dst);

  u64 now = engine_->now().cycle();
  u64 start = std::max(now, ret_free_cycle_);
  u64 ser = ceil_div(req->size_bytes(), width_);
  ret_free_cycle_ = start + ser;
  ret_busy_cycles_ += ser;
  engine_->schedule(SimTime::cycles(ret_free_cycle_), [this, req] {
    --occupancy_;
    if (!waiters_.empty()) {
      auto fn = std::move(waiters_.front());
      waiters_.pop_front();
      fn();
    }
    sink_(req);
  });
}

}  // namespace pnoc
