#include "mqflash/sim/engine.hpp"

#include <string>
#include <utility>

#include "mqflash/util/errors.hpp"

namespace mqflash::sim {

EventId Engine::schedule(SimTime fire_at, std::function<void()> action) {
  if (fire_at < now_)
    throw SchedulingInPast("event at " + std::to_string(fire_at) +
                           " ns is before current time " +
                           std::to_string(now_) + " ns");
  const EventId id = next_id_++;
  heap_.push({fire_at, id});
  actions_.emplace(id, std::move(action));
  ++live_;
  ++n_scheduled_;
  return id;
}

bool Engine::cancel(EventId id) {
  auto it = actions_.find(id);
  if (it == actions_.end()) return false;
  // The heap entry stays behind; the run loop skips ids with no action.
  actions_.erase(it);
  --live_;
  ++n_cancelled_;
  return true;
}

SimTime Engine::run_until_idle() {
  while (!heap_.empty()) {
    const Slot top = heap_.top();
    heap_.pop();
    auto it = actions_.find(top.id);
    if (it == actions_.end()) continue;  // lazily removed cancellation
    now_ = top.fire_at;
    auto action = std::move(it->second);
    actions_.erase(it);
    --live_;
    ++n_fired_;
    action();
  }
  return now_;
}

}  // namespace mqflash::sim
