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
#ifndef PNOC_EVENT_ENGINE_HPP_
#define PNOC_EVENT_ENGINE_HPP_

#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnoc/types.hpp"

namespace pnoc {

// Raised when the event queue drains while the workload reports unfinished
// transactions. Carries the driver's stuck-state report.
class DeadlockError : public std::runtime_error {
 public:
  explicit DeadlockError(const std::string& report)
      : std::runtime_error("deadlock: event queue empty with work outstanding\n" + report) {}
};

// Deterministic discrete-event engine. Events fire in (time, issue order);
// the sequence number breaks ties so equal-time events replay identically
// run to run. Single-threaded; one engine per simulation.
class EventEngine {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  void schedule(SimTime at, Action fn) {
    if (at < now_) {
      throw std::logic_error("schedule into the past: t=" + std::to_string(at.phases) +
                             " now=" + std::to_string(now_.phases));
    }
    queue_.push(Event{at, next_seq_++, std::move(fn)});
  }

  void schedule_in(SimTime delta, Action fn) { schedule(now_ + delta, std::move(fn)); }

  // Runs until the queue is empty (or stop is requested). If an idle handler
  // is installed and reports outstanding work when the queue drains, the run
  // aborts with a DeadlockError carrying the handler's report.
  SimTime run() {
    stop_ = false;
    while (!queue_.empty() && !stop_) {
      dispatch_front();
    }
    if (!stop_) check_idle();
    return now_;
  }

  // Runs events with fire time <= limit, then advances the clock to limit.
  SimTime run_until(SimTime limit) {
    stop_ = false;
    while (!queue_.empty() && !stop_ && queue_.top().at <= limit) {
      dispatch_front();
    }
    if (!stop_) {
      if (queue_.empty()) check_idle();
      if (now_ < limit) now_ = limit;
    }
    return now_;
  }

  void request_stop() { stop_ = true; }
  bool stopped() const { return stop_; }

  // The idle handler returns a non-empty report iff work is still outstanding.
  void set_idle_handler(std::function<std::string()> h) { idle_handler_ = std::move(h); }

  // Test hook: observes every dispatch as (time, sequence).
  void set_dispatch_observer(std::function<void(SimTime, u64)> obs) {
    observer_ = std::move(obs);
  }

  u64 events_dispatched() const { return dispatched_; }
  u64 events_pending() const { return queue_.size(); }

 private:
  struct Event {
    SimTime at;
    u64 seq;
    Action fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  void dispatch_front() {
    // The action is moved out before popping so it may schedule freely.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    now_ = ev.at;
    ++dispatched_;
    if (observer_) observer_(ev.at, ev.seq);
    ev.fn();
  }

  void check_idle() {
    if (!idle_handler_) return;
    std::string report = idle_handler_();
    if (!report.empty()) throw DeadlockError(report);
  }

  SimTime now_{};
  u64 next_seq_ = 0;
  u64 dispatched_ = 0;
  bool stop_ = false;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::function<std::string()> idle_handler_;
  std::function<void(SimTime, u64)> observer_;
};

}  // namespace pnoc

#endif  // PNOC_EVENT_ENGINE_HPP_
