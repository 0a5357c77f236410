#include "mqflash/gpu/scheduler.hpp"

#include <limits>

#include "mqflash/util/errors.hpp"

namespace mqflash::gpu {

std::string to_string(Policy p) {
  switch (p) {
    case Policy::ROUND_ROBIN: return "rr";
    case Policy::LARGE_CHUNK: return "large_chunk";
    case Policy::AUTO: return "auto";
  }
  return "?";
}

Policy policy_from_string(const std::string& s) {
  if (s == "rr" || s == "round_robin") return Policy::ROUND_ROBIN;
  if (s == "lc" || s == "large_chunk") return Policy::LARGE_CHUNK;
  if (s == "auto") return Policy::AUTO;
  throw ConfigError("unknown policy '" + s +
                    "' (want rr, large_chunk, or auto)");
}

void SchedConfig::validate() const {
  if (block_stride < 1) throw ConfigError("block_stride must be >= 1");
  if (core_count < 1) throw ConfigError("core_count must be >= 1");
  if (chunk_len < 1) throw ConfigError("chunk_len must be >= 1");
}

Policy select_policy(const Kernel& k, const SchedConfig& cfg) {
  if (cfg.policy != Policy::AUTO) return cfg.policy;
  // Overflow-safe n_blocks < s_block * n_cores.
  if (cfg.block_stride >
      std::numeric_limits<std::uint64_t>::max() / cfg.core_count)
    return Policy::LARGE_CHUNK;
  return k.grid_blocks < cfg.block_stride * cfg.core_count
             ? Policy::LARGE_CHUNK
             : Policy::ROUND_ROBIN;
}

Scheduler::Scheduler(const Trace& trace, SchedConfig cfg)
    : trace_(trace), cfg_(cfg) {
  cfg_.validate();
  ready_.resize(trace_.by_workload.size());
  for (std::size_t w = 0; w < trace_.by_workload.size(); ++w) {
    ready_[w].assign(trace_.by_workload[w].begin(),
                     trace_.by_workload[w].end());
    remaining_ += ready_[w].size();
  }
}

std::optional<std::uint32_t> Scheduler::next() {
  if (remaining_ == 0) return std::nullopt;
  for (std::size_t hops = 0; hops <= ready_.size(); ++hops) {
    if (ready_.empty()) break;
    auto& q = ready_[current_];
    if (q.empty()) {
      current_ = (current_ + 1) % ready_.size();
      taken_ = 0;
      continue;
    }
    if (taken_ == 0) {
      const Kernel& head = trace_.kernels[q.front()];
      stay_limit_ = select_policy(head, cfg_) == Policy::LARGE_CHUNK
                        ? cfg_.chunk_len
                        : 1;
    }
    std::uint32_t idx = q.front();
    q.pop_front();
    --remaining_;
    ++taken_;
    if (taken_ >= stay_limit_ || q.empty()) {
      current_ = (current_ + 1) % ready_.size();
      taken_ = 0;
    }
    return idx;
  }
  return std::nullopt;
}

}  // namespace mqflash::gpu
