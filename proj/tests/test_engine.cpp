#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "mqflash/sim/engine.hpp"
#include "mqflash/util/errors.hpp"
#include "mqflash/util/rng.hpp"

using namespace mqflash;
using sim::Engine;
using sim::SimTime;

TEST_CASE("empty queue returns current clock") {
  Engine eng;
  CHECK(eng.run_until_idle() == 0);
  CHECK(eng.now() == 0);
}

TEST_CASE("single event fires at its time and sets the end time") {
  Engine eng;
  SimTime seen = 0;
  eng.schedule(700000, [&] { seen = eng.now(); });
  CHECK(eng.run_until_idle() == 700000);
  CHECK(seen == 700000);
}

TEST_CASE("event scheduled at 100 fires when the clock reaches 100") {
  Engine eng;
  bool fired = false;
  eng.schedule(100, [&] {
    fired = true;
    CHECK(eng.now() == 100);
  });
  CHECK(!fired);
  eng.run_until_idle();
  CHECK(fired);
}

TEST_CASE("equal-time events fire in insertion order") {
  Engine eng;
  std::vector<char> order;
  eng.schedule(100, [&] { order.push_back('A'); });
  eng.schedule(100, [&] { order.push_back('B'); });
  eng.run_until_idle();
  CHECK(order == std::vector<char>{'A', 'B'});
}

TEST_CASE("scheduling before the clock throws") {
  Engine eng;
  eng.schedule(100, [] {});
  eng.run_until_idle();
  CHECK(eng.now() == 100);
  CHECK_THROWS_AS(eng.schedule(50, [] {}), SchedulingInPast);
}

TEST_CASE("self-scheduling chain of +10ns, depth 5, ends at 50") {
  Engine eng;
  int remaining = 5;
  std::function<void()> step = [&] {
    if (--remaining > 0) eng.schedule(eng.now() + 10, step);
  };
  eng.schedule(10, step);
  CHECK(eng.run_until_idle() == 50);
  CHECK(remaining == 0);
}

TEST_CASE("cancel prevents firing; double cancel reports false") {
  Engine eng;
  int fired = 0;
  eng.schedule(10, [&] { ++fired; });
  auto id = eng.schedule(20, [&] { ++fired; });
  CHECK(eng.cancel(id));
  CHECK(!eng.cancel(id));
  eng.run_until_idle();
  CHECK(fired == 1);
  CHECK(!eng.cancel(id));  // already-fired ids are not cancellable either
}

TEST_CASE("conservation: fired + cancelled = scheduled at idle") {
  Engine eng;
  util::Rng rng(42);
  std::vector<sim::EventId> ids;
  for (int i = 0; i < 500; ++i) {
    auto id = eng.schedule(rng.below(10000), [&eng, &rng] {
      // Handlers keep scheduling (and sometimes cancelling) more work.
      if (rng.below(4) == 0) {
        auto child = eng.schedule(eng.now() + 1 + rng.below(50), [] {});
        if (rng.below(2) == 0) eng.cancel(child);
      }
    });
    ids.push_back(id);
  }
  for (std::size_t i = 0; i < ids.size(); i += 7) eng.cancel(ids[i]);
  eng.run_until_idle();
  CHECK(eng.idle());
  CHECK(eng.fired() + eng.cancelled() == eng.scheduled());
}

TEST_CASE("determinism: identical insertions yield identical fire sequences") {
  auto trace_run = [](std::uint64_t seed) {
    Engine eng;
    util::Rng rng(seed);
    std::vector<std::pair<SimTime, int>> fired;
    for (int i = 0; i < 300; ++i) {
      const SimTime at = rng.below(5000);
      eng.schedule(at, [&fired, &eng, i] {
        fired.emplace_back(eng.now(), i);
      });
    }
    eng.run_until_idle();
    return fired;
  };
  CHECK(trace_run(7) == trace_run(7));
}

TEST_CASE("clock is non-decreasing while firing") {
  Engine eng;
  util::Rng rng(3);
  SimTime last = 0;
  bool monotonic = true;
  for (int i = 0; i < 400; ++i) {
    eng.schedule(rng.below(1000), [&] {
      if (eng.now() < last) monotonic = false;
      last = eng.now();
    });
  }
  eng.run_until_idle();
  CHECK(monotonic);
}
