#pragma once

#include <functional>
#include <vector>

#include "mqflash/flash/transaction.hpp"
#include "mqflash/sim/engine.hpp"

namespace mqflash::flash {

// Reservation-based timing model over two serialized resource kinds: one bus
// per channel and one array per plane. PROGRAM takes the bus then the plane;
// READ takes the plane then the bus; ERASE takes the plane only. Submissions
// to the same resource serialize in submission order.
class Backend {
 public:
  using Completion = std::function<void(const Transaction&)>;

  Backend(sim::Engine& eng, const Geometry& g, const Timing& t);

  // Reserves bus/array time, schedules the completion callback through the
  // engine, and returns the completion time. Throws OutOfGeometry when the
  // target lies outside the configured device.
  SimTime submit(Transaction txn, Completion on_done);

  const Geometry& geometry() const { return geo_; }
  const Timing& timing() const { return tim_; }

  // Cumulative array-busy time per flat plane index (utilization probes).
  const std::vector<SimTime>& plane_busy_ns() const { return plane_busy_; }

 private:
  sim::Engine& eng_;
  Geometry geo_;
  Timing tim_;
  std::vector<SimTime> bus_free_;    // per channel
  std::vector<SimTime> array_free_;  // per flat plane
  std::vector<SimTime> plane_busy_;
};

}  // namespace mqflash::flash
