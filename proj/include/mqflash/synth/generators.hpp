#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mqflash/gpu/trace.hpp"

namespace mqflash::synth {

struct SynthParams {
  std::uint64_t kernels = 1000;
  std::uint64_t space_bytes = 64ull << 20;  // addressable window
  std::uint64_t io_bytes = 4096;            // unit transfer size
  std::string workload = "synth";
  std::uint64_t seed = 1;
};

// Registry of shipped generators, in documentation order:
//   rand_write_4k   one aligned 4 KiB-class write per kernel, uniform offsets
//   rand_read_4k    sequential populate prefix, then uniform aligned reads
//   sequential      one write per kernel, offsets advancing in order
//   backprop_like   two alternating phases, regular strides in a local window
//   hotspot_like    mostly compute; every 8th kernel bursts writes on a hot MiB
//   lavamd_like     mixed small/boxed kernels with read+write pairs
//   bimodal_exec    one kernel shape with two execution-time modes
std::vector<std::string> generator_names();

// Deterministic per (kind, params). Throws UnknownGenerator for a kind not
// in the registry.
std::vector<gpu::Kernel> make_trace(const std::string& kind,
                                    const SynthParams& p);

}  // namespace mqflash::synth
