#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "mqflash/device.hpp"
#include "mqflash/gpu/frontend.hpp"
#include "mqflash/gpu/scheduler.hpp"
#include "mqflash/gpu/trace.hpp"
#include "mqflash/util/errors.hpp"

using namespace mqflash;
using namespace mqflash::gpu;

namespace {

Kernel k(std::string workload, std::string name, std::uint64_t exec,
         std::uint64_t grid = 64) {
  Kernel out;
  out.workload = std::move(workload);
  out.name = std::move(name);
  out.grid_blocks = grid;
  out.block_threads = 256;
  out.exec_ns = exec;
  return out;
}

Trace make_trace(std::vector<Kernel> kernels) {
  Trace t;
  t.kernels = std::move(kernels);
  t.index_workloads();
  return t;
}

std::vector<std::string> order_of(Trace& t, SchedConfig cfg) {
  Scheduler s(t, cfg);
  std::vector<std::string> names;
  while (auto i = s.next()) names.push_back(t.kernels[*i].name);
  return names;
}

}  // namespace

TEST_CASE("trace records parse field for field") {
  std::istringstream in(
      R"({"workload":"wl_a","kernel":0,"name":"gemm","grid":1024,"block":256,"exec_ns":50000,"ios":[{"delta_ns":10,"op":"R","offset":4096,"len":8192}]})"
      "\n\n"
      R"({"workload":"wl_a","kernel":1,"name":"relu","grid":512,"block":128,"exec_ns":7000,"ios":[]})"
      "\n"
      R"({"workload":"wl_b","kernel":0,"name":"scan","grid":64,"block":64,"exec_ns":900,"ios":[{"delta_ns":0,"op":"W","offset":0,"len":4096}]})"
      "\n");
  Trace t = load_trace(in);
  REQUIRE(t.kernels.size() == 3);
  CHECK(t.kernels[0].workload == "wl_a");
  CHECK(t.kernels[0].name == "gemm");
  CHECK(t.kernels[0].grid_blocks == 1024);
  CHECK(t.kernels[0].block_threads == 256);
  CHECK(t.kernels[0].exec_ns == 50000);
  REQUIRE(t.kernels[0].ios.size() == 1);
  CHECK(t.kernels[0].ios[0].delta_ns == 10);
  CHECK(t.kernels[0].ios[0].op == host::IoOp::READ);
  CHECK(t.kernels[0].ios[0].offset_bytes == 4096);
  CHECK(t.kernels[0].ios[0].length_bytes == 8192);
  CHECK(t.kernels[1].ios.empty());
  CHECK(t.kernels[2].ios[0].op == host::IoOp::WRITE);
  REQUIRE(t.workload_names.size() == 2);
  CHECK(t.workload_names[0] == "wl_a");
  CHECK(t.by_workload[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(t.by_workload[1] == std::vector<std::uint32_t>{2});
  CHECK(t.total_exec_ns() == 57900);
}

TEST_CASE("an empty trace is valid") {
  std::istringstream in("\n\n");
  Trace t = load_trace(in);
  CHECK(t.kernels.empty());
  CHECK(t.workload_names.empty());
}

TEST_CASE("malformed traces report the failing line") {
  auto load = [](const std::string& s) {
    std::istringstream in(s);
    return load_trace(in);
  };
  const std::string ok =
      R"({"workload":"w","kernel":0,"name":"k","grid":1,"block":1,"exec_ns":5,"ios":[]})";
  CHECK_NOTHROW(load(ok));
  try {
    load(ok + "\nnot json\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(
      load(R"({"workload":"w","kernel":0,"name":"k","grid":1,"block":1,"ios":[]})"),
      ParseError);  // exec_ns missing
  CHECK_THROWS_AS(
      load(R"({"workload":"w","kernel":0,"name":"k","grid":0,"block":1,"exec_ns":5,"ios":[]})"),
      ParseError);  // grid must be >= 1
  CHECK_THROWS_AS(
      load(R"({"workload":"w","kernel":0,"name":"k","grid":1,"block":1,"exec_ns":5,"ios":[{"delta_ns":0,"op":"X","offset":0,"len":4096}]})"),
      ParseError);  // unknown op
}

TEST_CASE("negative counts are their own failure class") {
  std::istringstream in(
      R"({"workload":"w","kernel":0,"name":"k","grid":1,"block":1,"exec_ns":-1,"ios":[]})");
  CHECK_THROWS_AS(load_trace(in), NegativeField);
}

TEST_CASE("group headers expand by largest remainder") {
  std::istringstream in(
      R"({"group":{"name":"gemm","grid":64,"block":256,"members":5,"sampled":2}})"
      "\n"
      R"({"workload":"w","kernel":0,"name":"gemm","grid":64,"block":256,"exec_ns":100,"ios":[]})"
      "\n"
      R"({"workload":"w","kernel":1,"name":"gemm","grid":64,"block":256,"exec_ns":200,"ios":[]})"
      "\n");
  Trace t = load_trace(in);
  REQUIRE(t.kernels.size() == 5);  // 3 copies of the first, 2 of the second
  int hundreds = 0, two_hundreds = 0;
  for (const auto& kn : t.kernels) {
    if (kn.exec_ns == 100) ++hundreds;
    if (kn.exec_ns == 200) ++two_hundreds;
  }
  CHECK(hundreds == 3);
  CHECK(two_hundreds == 2);
}

TEST_CASE("truncated or overlapping groups are rejected") {
  std::istringstream eof_inside(
      R"({"group":{"name":"g","grid":1,"block":1,"members":4,"sampled":2}})"
      "\n"
      R"({"workload":"w","kernel":0,"name":"g","grid":1,"block":1,"exec_ns":1,"ios":[]})"
      "\n");
  CHECK_THROWS_AS(load_trace(eof_inside), ParseError);

  std::istringstream nested(
      R"({"group":{"name":"g","grid":1,"block":1,"members":4,"sampled":2}})"
      "\n"
      R"({"group":{"name":"h","grid":1,"block":1,"members":2,"sampled":1}})"
      "\n");
  CHECK_THROWS_AS(load_trace(nested), ParseError);
}

TEST_CASE("traces round-trip through write and load") {
  std::vector<Kernel> kernels{k("wl_a", "gemm", 1000), k("wl_b", "scan", 50)};
  kernels[0].ios.push_back({5, host::IoOp::WRITE, 8192, 4096});
  std::ostringstream out;
  write_trace(out, kernels);
  std::istringstream in(out.str());
  Trace t = load_trace(in);
  REQUIRE(t.kernels.size() == 2);
  CHECK(t.kernels[0].name == "gemm");
  CHECK(t.kernels[0].ios.size() == 1);
  CHECK(t.kernels[0].ios[0].offset_bytes == 8192);
  CHECK(t.kernels[1].workload == "wl_b");

  std::ostringstream again;
  write_trace(again, t.kernels);
  CHECK(again.str() == out.str());
}

TEST_CASE("policy names round-trip") {
  CHECK(policy_from_string("rr") == Policy::ROUND_ROBIN);
  CHECK(policy_from_string("round_robin") == Policy::ROUND_ROBIN);
  CHECK(policy_from_string("lc") == Policy::LARGE_CHUNK);
  CHECK(policy_from_string("large_chunk") == Policy::LARGE_CHUNK);
  CHECK(policy_from_string("auto") == Policy::AUTO);
  CHECK(to_string(Policy::ROUND_ROBIN) == "rr");
  CHECK(to_string(Policy::LARGE_CHUNK) == "large_chunk");
  CHECK(to_string(Policy::AUTO) == "auto");
  CHECK_THROWS_AS(policy_from_string("fifo"), ConfigError);
}

TEST_CASE("small grids trigger long stays, large grids rotate") {
  SchedConfig cfg;
  cfg.block_stride = 2;
  cfg.core_count = 64;  // threshold: grid < 128
  CHECK(select_policy(k("w", "a", 1, 100), cfg) == Policy::LARGE_CHUNK);
  CHECK(select_policy(k("w", "a", 1, 127), cfg) == Policy::LARGE_CHUNK);
  CHECK(select_policy(k("w", "a", 1, 128), cfg) == Policy::ROUND_ROBIN);

  cfg.policy = Policy::LARGE_CHUNK;  // explicit choice wins regardless
  CHECK(select_policy(k("w", "a", 1, 1000000), cfg) == Policy::LARGE_CHUNK);
  cfg.policy = Policy::ROUND_ROBIN;
  CHECK(select_policy(k("w", "a", 1, 1), cfg) == Policy::ROUND_ROBIN);

  cfg.policy = Policy::AUTO;
  cfg.block_stride = UINT64_MAX;
  cfg.core_count = UINT64_MAX;  // product overflows; must not wrap to small
  CHECK(select_policy(k("w", "a", 1, UINT64_MAX), cfg) ==
        Policy::LARGE_CHUNK);
}

TEST_CASE("round robin interleaves one kernel per workload") {
  Trace t = make_trace({k("A", "a1", 1), k("A", "a2", 1), k("B", "b1", 1),
                        k("B", "b2", 1), k("C", "c1", 1), k("C", "c2", 1)});
  SchedConfig cfg;
  cfg.policy = Policy::ROUND_ROBIN;
  CHECK(order_of(t, cfg) ==
        std::vector<std::string>{"a1", "b1", "c1", "a2", "b2", "c2"});
}

TEST_CASE("large chunk stays on a workload for chunk_len kernels") {
  Trace t = make_trace({k("A", "a1", 1), k("A", "a2", 1), k("A", "a3", 1),
                        k("B", "b1", 1), k("B", "b2", 1)});
  SchedConfig cfg;
  cfg.policy = Policy::LARGE_CHUNK;
  cfg.chunk_len = 2;
  CHECK(order_of(t, cfg) ==
        std::vector<std::string>{"a1", "a2", "b1", "b2", "a3"});
}

TEST_CASE("auto decides the stay length from the head kernel") {
  // Threshold 128: "small" grids earn a chunk, "big" ones rotate at once.
  Trace t = make_trace({k("A", "a_small", 1, 10), k("A", "a2", 1, 10),
                        k("A", "a3", 1, 500), k("B", "b_big", 1, 500),
                        k("B", "b2", 1, 10), k("B", "b3", 1, 10)});
  SchedConfig cfg;
  cfg.policy = Policy::AUTO;
  cfg.block_stride = 2;
  cfg.core_count = 64;
  cfg.chunk_len = 2;
  // A's small head earns a 2-stay, B's big head rotates after one, A's big
  // head rotates after one, B's small head earns the final 2-stay.
  CHECK(order_of(t, cfg) == std::vector<std::string>{"a_small", "a2", "b_big",
                                                     "a3", "b2", "b3"});
}

TEST_CASE("a single workload plays in order under both policies") {
  for (Policy p : {Policy::ROUND_ROBIN, Policy::LARGE_CHUNK}) {
    Trace t = make_trace({k("A", "a1", 1), k("A", "a2", 1), k("A", "a3", 1)});
    SchedConfig cfg;
    cfg.policy = p;
    CHECK(order_of(t, cfg) == std::vector<std::string>{"a1", "a2", "a3"});
  }
}

TEST_CASE("scheduler config rejects zero-valued knobs") {
  SchedConfig cfg;
  cfg.core_count = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SchedConfig{};
  cfg.chunk_len = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = SchedConfig{};
  cfg.block_stride = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_NOTHROW(SchedConfig{}.validate());
}

TEST_CASE("a kernel without i/o finishes when its compute does") {
  sim::Engine eng;
  SsdDevice dev(eng, DeviceConfig{});
  Trace t = make_trace({k("A", "a1", 1000)});
  Frontend fe(eng, dev, t, SchedConfig{});
  fe.start();
  dev.drain();
  CHECK(fe.done());
  CHECK(fe.kernels_finished() == 1);
  CHECK(fe.ios_issued() == 0);
  CHECK(fe.last_kernel_end() == 1000);
}

TEST_CASE("a kernel waits for its slowest i/o before finishing") {
  sim::Engine eng;
  SsdDevice dev(eng, DeviceConfig{});
  Kernel kn = k("A", "a1", 1000);
  kn.ios.push_back({0, host::IoOp::WRITE, 0, 16384});  // done at 701,160
  Trace t = make_trace({kn});
  Frontend fe(eng, dev, t, SchedConfig{});
  fe.start();
  dev.drain();
  CHECK(fe.done());
  CHECK(fe.ios_issued() == 1);
  CHECK(fe.last_kernel_end() == 701160);
}

TEST_CASE("one core slot serializes kernels") {
  sim::Engine eng;
  SsdDevice dev(eng, DeviceConfig{});
  Trace t = make_trace({k("A", "a1", 1000), k("A", "a2", 1000)});
  SchedConfig cfg;
  cfg.core_count = 1;
  Frontend fe(eng, dev, t, cfg);
  fe.start();
  dev.drain();
  CHECK(fe.kernels_finished() == 2);
  CHECK(fe.last_kernel_end() == 2000);

  sim::Engine eng2;
  SsdDevice dev2(eng2, DeviceConfig{});
  Trace t2 = make_trace({k("A", "a1", 1000), k("A", "a2", 1000)});
  SchedConfig two;
  two.core_count = 2;
  Frontend fe2(eng2, dev2, t2, two);
  fe2.start();
  dev2.drain();
  CHECK(fe2.last_kernel_end() == 1000);  // side by side
}

TEST_CASE("workloads map onto queue pairs round-robin") {
  // Two pairs of depth 1. Workloads A and B get their own pairs, so their
  // writes run side by side; workload C wraps onto A's pair and its write
  // must wait out A's in-flight request.
  auto run = [](bool with_c) {
    sim::Engine eng;
    DeviceConfig dcfg;
    dcfg.queue_count = 2;
    dcfg.queue_depth = 1;
    SsdDevice dev(eng, dcfg);
    std::vector<Kernel> kernels;
    for (const char* w : {"A", "B"}) {
      Kernel kn = k(w, std::string(w) + "1", 10);
      kn.ios.push_back(
          {0, host::IoOp::WRITE, kernels.size() * 16384, 16384});
      kernels.push_back(kn);
    }
    if (with_c) {
      Kernel kn = k("C", "C1", 10);
      kn.ios.push_back({0, host::IoOp::WRITE, 2 * 16384, 16384});
      kernels.push_back(kn);
    }
    Trace t = make_trace(std::move(kernels));
    Frontend fe(eng, dev, t, SchedConfig{});
    fe.start();
    dev.drain();
    return fe.last_kernel_end();
  };
  CHECK(run(false) == 701160);  // distinct pairs, fully parallel
  CHECK(run(true) == 1402320);  // C shares pair 0 and serializes behind A
}

TEST_CASE("backlogged i/o drains through a depth-1 queue") {
  sim::Engine eng;
  DeviceConfig dcfg;
  dcfg.queue_depth = 1;
  SsdDevice dev(eng, dcfg);
  Kernel kn = k("A", "a1", 10);
  for (int i = 0; i < 6; ++i)
    kn.ios.push_back({0, host::IoOp::WRITE, std::uint64_t(i) * 16384, 16384});
  Trace t = make_trace({kn});
  Frontend fe(eng, dev, t, SchedConfig{});
  fe.start();
  dev.drain();
  CHECK(fe.done());
  CHECK(fe.ios_issued() == 6);
  CHECK(dev.metrics().completed() == 6);
}
