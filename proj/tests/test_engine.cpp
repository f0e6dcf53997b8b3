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

#include <vector>

#include "pnoc/event_engine.hpp"

using namespace pnoc;

TEST_SUITE_BEGIN("engine");

TEST_CASE("events fire in time order, ties in scheduling order") {
  EventEngine e;
  std::vector<int> fired;
  e.schedule(SimTime(30), [&] { fired.push_back(3); });
  e.schedule(SimTime(10), [&] { fired.push_back(1); });
  e.schedule(SimTime(20), [&] { fired.push_back(20); });
  e.schedule(SimTime(20), [&] { fired.push_back(21); });
  e.schedule(SimTime(20), [&] { fired.push_back(22); });
  e.schedule(SimTime(0), [&] { fired.push_back(0); });
  e.run();
  CHECK(fired == std::vector<int>{0, 1, 20, 21, 22, 3});
  CHECK(e.events_dispatched() == 6);
  CHECK(e.now() == SimTime(30));
}

TEST_CASE("handlers can schedule at the current time but not before it") {
  EventEngine e;
  bool tail_ran = false;
  e.schedule(SimTime(100), [&] {
    e.schedule(SimTime(100), [&] { tail_ran = true; });  // same time: fine
    CHECK_THROWS_AS(e.schedule(SimTime(99), [] {}), std::logic_error);
  });
  e.run();
  CHECK(tail_ran);
}

TEST_CASE("run_until dispatches only up to the limit and advances the clock") {
  EventEngine e;
  int count = 0;
  e.schedule(SimTime::cycles(3), [&] { ++count; });
  e.schedule(SimTime::cycles(7), [&] { ++count; });
  e.schedule(SimTime::cycles(12), [&] { ++count; });

  e.run_until(SimTime::cycles(7));
  CHECK(count == 2);
  CHECK(e.now() == SimTime::cycles(7));
  CHECK(e.events_pending() == 1);

  // No events between 7 and 10; the clock still moves to the limit.
  e.run_until(SimTime::cycles(10));
  CHECK(count == 2);
  CHECK(e.now() == SimTime::cycles(10));

  e.run();
  CHECK(count == 3);
  CHECK(e.now() == SimTime::cycles(12));
}

TEST_CASE("an idle queue with outstanding work reports deadlock") {
  EventEngine e;
  e.set_idle_handler([] { return std::string("4 transactions stuck"); });
  e.schedule(SimTime(5), [] {});
  CHECK_THROWS_AS(e.run(), DeadlockError);

  EventEngine ok;
  ok.set_idle_handler([] { return std::string(); });
  ok.schedule(SimTime(5), [] {});
  CHECK(ok.run() == SimTime(5));
}

TEST_CASE("request_stop halts dispatch and preserves the queue") {
  EventEngine e;
  int count = 0;
  e.schedule(SimTime(1), [&] {
    ++count;
    e.request_stop();
  });
  e.schedule(SimTime(2), [&] { ++count; });
  e.run();
  CHECK(count == 1);
  CHECK(e.events_pending() == 1);
  CHECK(e.stopped());
}

TEST_CASE("dispatch observer sees (time, seq) for every event") {
  EventEngine e;
  std::vector<std::pair<u64, u64>> seen;
  e.set_dispatch_observer([&](SimTime t, u64 seq) { seen.emplace_back(t.phases, seq); });
  e.schedule(SimTime(4), [] {});
  e.schedule(SimTime(2), [] {});
  e.schedule_in(SimTime(2), [] {});  // now=0, so fires at 2 after the first
  e.run();
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == std::pair<u64, u64>{2, 1});
  CHECK(seen[1] == std::pair<u64, u64>{2, 2});
  CHECK(seen[2] == std::pair<u64, u64>{4, 0});
}

TEST_CASE("time helpers round as expected") {
  CHECK(SimTime::cycles(3).phases == 24);
  CHECK(SimTime(17).cycle() == 2);
  CHECK(SimTime(17).phase() == 1);
  CHECK(SimTime(16).cycle_aligned());
  CHECK_FALSE(SimTime(17).cycle_aligned());
  CHECK(SimTime(17).ceil_cycle() == SimTime(24));
  CHECK(SimTime(24).ceil_cycle() == SimTime(24));
  CHECK(SimTime::cycles(5).ns() == doctest::Approx(1.0));  // 5 cycles at 5 GHz
}

TEST_SUITE_END();
