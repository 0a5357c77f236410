#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mqflash/flash/backend.hpp"
#include "mqflash/ftl/ftl.hpp"
#include "mqflash/host/queue.hpp"
#include "mqflash/host/request.hpp"
#include "mqflash/metrics/collector.hpp"
#include "mqflash/sim/engine.hpp"

namespace mqflash {

struct DeviceConfig {
  flash::Geometry geometry;
  flash::Timing timing;
  ftl::Mapping mapping = ftl::Mapping::COARSE;
  ftl::Allocation allocation = ftl::Allocation::DYNAMIC;
  ftl::Scheme scheme = ftl::Scheme::CWDP;
  ftl::GcConfig gc;
  std::uint32_t queue_count = 1;
  std::uint32_t queue_depth = 256;
};

// One simulated SSD: multi-queue host interface in front, translation layer
// in the middle, timing backend underneath. All methods run on the single
// simulation thread.
class SsdDevice {
 public:
  SsdDevice(sim::Engine& eng, const DeviceConfig& cfg);

  // Accepts a request into a queue pair. Returns the request id, or nullopt
  // when the pair is at depth (queue full; caller retries on a completion).
  // Throws UnalignedAccess before consuming a queue slot.
  std::optional<std::uint64_t> enqueue(std::uint32_t qp, host::IoOp op,
                                       std::uint64_t offset_bytes,
                                       std::uint64_t length_bytes);

  // Drains completed requests of one pair, ordered by completion time then
  // submission order. When a completion hook is installed, completions are
  // delivered through it instead and this returns empty.
  std::vector<host::IoRequest> poll_completions(std::uint32_t qp);

  // PROGRAM any partially staged pages so their writers can complete.
  // Returns true if work was issued.
  bool flush_staged();

  // Runs the engine to idle, flushing staged pages between idles, until
  // nothing moves. Returns the simulation end time.
  sim::SimTime drain();

  // Called once per completed request, after its queue slot is released.
  void set_completion_hook(std::function<void(const host::IoRequest&)> h) {
    hook_ = std::move(h);
  }

  sim::Engine& engine() { return eng_; }
  flash::Backend& backend() { return backend_; }
  ftl::Ftl& ftl() { return ftl_; }
  metrics::Collector& metrics() { return metrics_; }
  const DeviceConfig& config() const { return cfg_; }
  std::uint32_t queue_count() const { return std::uint32_t(qps_.size()); }
  std::uint64_t inflight() const { return inflight_.size(); }

 private:
  struct Inflight {
    host::IoRequest req;
    std::uint32_t remaining = 0;  // transaction completions still owed
  };

  void execute_plan(ftl::Plan plan);
  void on_txn_done(const flash::Transaction& t);
  void finish_request(std::uint64_t id);

  sim::Engine& eng_;
  DeviceConfig cfg_;
  flash::Backend backend_;
  ftl::Ftl ftl_;
  metrics::Collector metrics_;
  std::vector<host::QueuePair> qps_;
  std::unordered_map<std::uint64_t, Inflight> inflight_;
  std::function<void(const host::IoRequest&)> hook_;
  std::uint64_t next_id_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace mqflash
