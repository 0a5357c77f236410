#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "mqflash/device.hpp"
#include "mqflash/gpu/scheduler.hpp"

namespace mqflash::harness {

// Everything one run needs. queue_count 0 means "one queue pair per
// workload in the trace", resolved when the trace is known.
struct RunConfig {
  DeviceConfig device;
  gpu::SchedConfig sched;
  std::uint64_t seed = 1;

  RunConfig() { device.queue_count = 0; }
};

// Applies one key=value pair; throws ConfigError naming an unknown key or a
// bad value. Exposed separately so command-line --set overrides reuse it.
void apply_kv(RunConfig& cfg, const std::string& key,
              const std::string& value);

// Flat key=value file, one pair per line, '#' starts a comment.
RunConfig parse_config(std::istream& in);
RunConfig load_config_file(const std::filesystem::path& p);

}  // namespace mqflash::harness
