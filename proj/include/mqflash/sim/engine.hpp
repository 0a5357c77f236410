#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

namespace mqflash::sim {

using SimTime = std::uint64_t;  // virtual nanoseconds
using EventId = std::uint64_t;

// Deterministic discrete-event core. Events fire in (fire_at, schedule order);
// handlers may schedule and cancel freely while the queue drains. One engine
// per simulation run; instances share nothing, so the sweep harness can run
// many in parallel.
class Engine {
 public:
  // Queues an action; throws SchedulingInPast if fire_at < now().
  EventId schedule(SimTime fire_at, std::function<void()> action);

  // Removes a pending event. Returns false if it already fired or was
  // cancelled before.
  bool cancel(EventId id);

  // Fires everything in (time, sequence) order; returns the final clock,
  // i.e. the simulation end time. An empty queue returns the current clock.
  SimTime run_until_idle();

  SimTime now() const { return now_; }
  bool idle() const { return live_ == 0; }

  std::uint64_t scheduled() const { return n_scheduled_; }
  std::uint64_t fired() const { return n_fired_; }
  std::uint64_t cancelled() const { return n_cancelled_; }

 private:
  struct Slot {
    SimTime fire_at;
    EventId id;
    bool operator>(const Slot& o) const {
      if (fire_at != o.fire_at) return fire_at > o.fire_at;
      return id > o.id;  // ids ascend in schedule order
    }
  };

  std::priority_queue<Slot, std::vector<Slot>, std::greater<Slot>> heap_;
  std::unordered_map<EventId, std::function<void()>> actions_;
  SimTime now_ = 0;
  EventId next_id_ = 1;
  std::uint64_t live_ = 0;  // scheduled, not yet fired or cancelled
  std::uint64_t n_scheduled_ = 0;
  std::uint64_t n_fired_ = 0;
  std::uint64_t n_cancelled_ = 0;
};

}  // namespace mqflash::sim
