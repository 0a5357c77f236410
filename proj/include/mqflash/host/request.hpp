#pragma once

#include <cstdint>
#include <vector>

#include "mqflash/sim/engine.hpp"

namespace mqflash::host {

using sim::SimTime;

enum class IoOp : std::uint8_t { READ, WRITE };

struct IoRequest {
  std::uint64_t id = 0;
  std::uint32_t queue_id = 0;
  IoOp op = IoOp::READ;
  std::uint64_t offset_bytes = 0;
  std::uint64_t length_bytes = 0;
  SimTime submit_time = 0;
  SimTime complete_time = 0;
  std::uint64_t submit_seq = 0;  // global order of acceptance (tie-breaks)
  // For reads: content tag per sector, captured at translation time
  // (0 = never-written, zero-filled).
  std::vector<std::uint64_t> data_versions;

  SimTime response_ns() const { return complete_time - submit_time; }
};

}  // namespace mqflash::host
