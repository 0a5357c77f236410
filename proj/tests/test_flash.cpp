#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "mqflash/flash/backend.hpp"
#include "mqflash/flash/geometry.hpp"
#include "mqflash/sim/engine.hpp"
#include "mqflash/util/errors.hpp"
#include "mqflash/util/rng.hpp"

using namespace mqflash;
using namespace mqflash::flash;

namespace {

Transaction make(TxnKind kind, std::uint32_t channel, std::uint32_t plane,
                 std::uint32_t block, std::uint32_t page,
                 std::uint32_t sectors) {
  Transaction t;
  t.kind = kind;
  t.source = kind == TxnKind::READ ? TxnSource::HOST_READ
             : kind == TxnKind::PROGRAM ? TxnSource::HOST_PROGRAM
                                        : TxnSource::GC_ERASE;
  t.plane = PlaneAddr{channel, 0, 0, plane};
  t.block = block;
  t.page = page;
  t.sectors = sectors;
  return t;
}

}  // namespace

TEST_CASE("transfer time: 4 sectors at 0.4 B/ns, no overhead") {
  Geometry g;
  Timing t;
  t.bus_bytes_per_ns = 0.4;
  t.cmd_overhead_ns = 0;
  CHECK(transfer_ns(g, t, 4) == 40960);
}

TEST_CASE("transfer time: 1 sector at 0.4 B/ns plus 200ns overhead") {
  Geometry g;
  Timing t;  // defaults: 0.4 B/ns, 200 ns
  CHECK(transfer_ns(g, t, 1) == 10440);
}

TEST_CASE("transfer time lands exactly on even divisions") {
  // 4096 / 0.4096 is exactly 10000; a float-ceil would risk 10001.
  Geometry g;
  Timing t;
  t.bus_bytes_per_ns = 0.4096;
  t.cmd_overhead_ns = 0;
  CHECK(transfer_ns(g, t, 1) == 10000);
  CHECK(transfer_ns(g, t, 4) == 40000);
}

TEST_CASE("transfer time rejects empty and oversized payloads") {
  Geometry g;  // 4 sectors per page
  Timing t;
  CHECK_THROWS_AS(transfer_ns(g, t, 0), std::invalid_argument);
  CHECK_THROWS_AS(transfer_ns(g, t, 5), std::invalid_argument);
}

TEST_CASE("geometry validation rejects zero dims and odd page sizes") {
  Geometry g;
  g.channels = 0;
  CHECK_THROWS_AS(g.validate(), ConfigError);
  g = Geometry{};
  g.page_bytes = 10000;  // not a multiple of 4096
  CHECK_THROWS_AS(g.validate(), ConfigError);
  CHECK_NOTHROW(Geometry{}.validate());
}

// Timing used by the reservation examples: full-page transfer = 40,000 ns.
static Timing example_timing() {
  Timing t;
  t.bus_bytes_per_ns = 0.4096;
  t.cmd_overhead_ns = 0;
  return t;
}

TEST_CASE("idle PROGRAM of a full page completes at transfer + tPROG") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  Transaction seen;
  const sim::SimTime done =
      be.submit(make(TxnKind::PROGRAM, 0, 0, 0, 0, 4),
                [&](const Transaction& t) { seen = t; });
  CHECK(done == 700000);
  eng.run_until_idle();
  CHECK(seen.bus_start_ns == 0);
  CHECK(seen.bus_end_ns == 40000);
  CHECK(seen.array_start_ns == 40000);
  CHECK(seen.array_end_ns == 700000);
  CHECK(seen.done_ns == 700000);
}

TEST_CASE("same channel, different planes: bus serializes, arrays overlap") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  const auto d1 = be.submit(make(TxnKind::PROGRAM, 0, 0, 0, 0, 4), {});
  const auto d2 = be.submit(make(TxnKind::PROGRAM, 0, 1, 0, 0, 4), {});
  CHECK(d1 == 700000);
  CHECK(d2 == 740000);
}

TEST_CASE("same plane: second array op waits for the plane") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  const auto d1 = be.submit(make(TxnKind::PROGRAM, 0, 0, 0, 0, 4), {});
  const auto d2 = be.submit(make(TxnKind::PROGRAM, 0, 0, 0, 1, 4), {});
  CHECK(d1 == 700000);
  CHECK(d2 == 1360000);
}

TEST_CASE("READ senses on the plane, then moves over the bus") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  Transaction seen;
  const auto done = be.submit(make(TxnKind::READ, 0, 0, 0, 0, 4),
                              [&](const Transaction& t) { seen = t; });
  CHECK(done == 90000);  // tR 50,000 then 40,000 transfer
  eng.run_until_idle();
  CHECK(seen.array_start_ns == 0);
  CHECK(seen.array_end_ns == 50000);
  CHECK(seen.bus_start_ns == 50000);
  CHECK(seen.bus_end_ns == 90000);
}

TEST_CASE("ERASE occupies the plane only") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  Transaction seen;
  const auto done = be.submit(make(TxnKind::ERASE, 0, 0, 0, 0, 0),
                              [&](const Transaction& t) { seen = t; });
  CHECK(done == 3500000);
  eng.run_until_idle();
  CHECK(seen.bus_start_ns == seen.bus_end_ns);  // zero-width
  // A PROGRAM elsewhere on the channel is not delayed by the erase.
  sim::Engine eng2;
  Backend be2(eng2, Geometry{}, example_timing());
  be2.submit(make(TxnKind::ERASE, 0, 0, 0, 0, 0), {});
  const auto p = be2.submit(make(TxnKind::PROGRAM, 0, 1, 0, 0, 4), {});
  CHECK(p == 700000);
}

TEST_CASE("targets outside the geometry are rejected") {
  sim::Engine eng;
  Backend be(eng, Geometry{}, example_timing());
  auto bad_channel = make(TxnKind::PROGRAM, 8, 0, 0, 0, 4);
  CHECK_THROWS_AS(be.submit(std::move(bad_channel), {}), OutOfGeometry);
  auto bad_page = make(TxnKind::PROGRAM, 0, 0, 0, 128, 4);
  CHECK_THROWS_AS(be.submit(std::move(bad_page), {}), OutOfGeometry);
  // ERASE addresses a block; its page field is ignored.
  auto erase = make(TxnKind::ERASE, 0, 0, 0, 999, 0);
  CHECK_NOTHROW(be.submit(std::move(erase), {}));
  auto bad_payload = make(TxnKind::PROGRAM, 0, 0, 0, 0, 0);
  CHECK_THROWS_AS(be.submit(std::move(bad_payload), {}),
                  std::invalid_argument);
}

TEST_CASE("plane and channel busy intervals never overlap") {
  sim::Engine eng;
  Geometry g;
  g.channels = 2;
  g.ways_per_channel = 1;
  g.dies_per_way = 1;
  g.planes_per_die = 2;
  Backend be(eng, g, example_timing());
  util::Rng rng(11);
  struct Interval {
    sim::SimTime a, b;
  };
  std::vector<std::vector<Interval>> plane_busy(4), bus_busy(2);
  for (int i = 0; i < 200; ++i) {
    const auto kind = std::array<TxnKind, 3>{
        TxnKind::READ, TxnKind::PROGRAM, TxnKind::ERASE}[rng.below(3)];
    const std::uint32_t ch = std::uint32_t(rng.below(2));
    const std::uint32_t pl = std::uint32_t(rng.below(2));
    auto t = make(kind, ch, pl, std::uint32_t(rng.below(64)),
                  std::uint32_t(rng.below(128)),
                  kind == TxnKind::ERASE ? 0 : 1 + std::uint32_t(rng.below(4)));
    be.submit(std::move(t), [&, ch, pl](const Transaction& d) {
      plane_busy[ch * 2 + pl].push_back({d.array_start_ns, d.array_end_ns});
      if (d.bus_end_ns > d.bus_start_ns)
        bus_busy[ch].push_back({d.bus_start_ns, d.bus_end_ns});
    });
  }
  eng.run_until_idle();
  auto disjoint = [](std::vector<Interval>& v) {
    std::sort(v.begin(), v.end(),
              [](const Interval& a, const Interval& b) { return a.a < b.a; });
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].a < v[i - 1].b) return false;
    return true;
  };
  for (auto& v : plane_busy) CHECK(disjoint(v));
  for (auto& v : bus_busy) CHECK(disjoint(v));
}

TEST_CASE("channel-disjoint operations commute across submission order") {
  // Ops sharing a channel do not commute (the bus is granted in submission
  // order), so spread the pairs over all eight channels.
  auto completions = [](bool reversed) {
    sim::Engine eng;
    Backend be(eng, Geometry{}, example_timing());
    std::vector<Transaction> txns;
    for (std::uint32_t p = 0; p < 4; ++p) {
      txns.push_back(make(TxnKind::PROGRAM, p, 0, 0, 0, 4));
      txns.push_back(make(TxnKind::READ, p + 4, 1, 0, 0, 2));
    }
    if (reversed) std::reverse(txns.begin(), txns.end());
    std::vector<sim::SimTime> done;
    for (auto& t : txns) done.push_back(be.submit(std::move(t), {}));
    eng.run_until_idle();
    std::sort(done.begin(), done.end());
    return done;
  };
  CHECK(completions(false) == completions(true));
}

TEST_CASE("n planes in parallel vs one plane: the O(min(n,p)) mechanism") {
  const int n = 4;
  sim::Engine eng;
  Geometry g;
  g.channels = 4;
  g.ways_per_channel = 1;
  g.dies_per_way = 1;
  g.planes_per_die = 1;
  Backend be(eng, g, example_timing());
  std::vector<sim::SimTime> spread;
  for (std::uint32_t c = 0; c < n; ++c)
    spread.push_back(be.submit(make(TxnKind::PROGRAM, c, 0, 0, 0, 4), {}));
  const auto lo = *std::min_element(spread.begin(), spread.end());
  const auto hi = *std::max_element(spread.begin(), spread.end());
  CHECK(hi - lo <= 40000);  // within one transfer of each other

  sim::Engine eng2;
  Backend be2(eng2, g, example_timing());
  sim::SimTime last = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    last = be2.submit(make(TxnKind::PROGRAM, 0, 0, 0, i, 4), {});
  CHECK(last >= 40000 + std::uint64_t(n) * 660000);
  CHECK(double(last) / double(hi) > 3.0);  // ~n-fold serialization
}
