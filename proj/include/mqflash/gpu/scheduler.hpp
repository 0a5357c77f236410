#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "mqflash/gpu/trace.hpp"

namespace mqflash::gpu {

enum class Policy { ROUND_ROBIN, LARGE_CHUNK, AUTO };

std::string to_string(Policy p);
Policy policy_from_string(const std::string& s);

struct SchedConfig {
  Policy policy = Policy::AUTO;
  std::uint64_t block_stride = 8;  // s_block
  std::uint64_t core_count = 64;   // n_cores
  std::uint32_t chunk_len = 32;    // kernels per stay under LARGE_CHUNK

  void validate() const;
};

// AUTO resolves to LARGE_CHUNK exactly when the kernel's grid is strictly
// smaller than block_stride * core_count (small kernels benefit from longer
// stays); explicit policies pass through untouched.
Policy select_policy(const Kernel& k, const SchedConfig& cfg);

// Orders kernels across workloads. One kernel per workload visit under
// ROUND_ROBIN; chunk_len consecutive kernels per visit under LARGE_CHUNK.
// Under AUTO the kernel at the head of a workload decides that visit's
// length. Per-workload order is always preserved; exhausted workloads are
// skipped.
class Scheduler {
 public:
  Scheduler(const Trace& trace, SchedConfig cfg);

  // Next kernel index in the trace, or nullopt when all are dispatched.
  std::optional<std::uint32_t> next();

  std::uint64_t remaining() const { return remaining_; }

 private:
  const Trace& trace_;
  SchedConfig cfg_;
  std::vector<std::deque<std::uint32_t>> ready_;
  std::size_t current_ = 0;
  std::uint32_t taken_ = 0;       // kernels taken in the current stay
  std::uint32_t stay_limit_ = 1;  // visit length decided on arrival
  std::uint64_t remaining_ = 0;
};

}  // namespace mqflash::gpu
