#pragma once

#include <cstdint>

#include "mqflash/sim/engine.hpp"

namespace mqflash::flash {

using sim::SimTime;

// Physical shape of the device. Defaults are the reference enterprise-like
// configuration used throughout the docs and tests.
struct Geometry {
  std::uint32_t channels = 8;
  std::uint32_t ways_per_channel = 2;
  std::uint32_t dies_per_way = 2;
  std::uint32_t planes_per_die = 2;
  std::uint32_t blocks_per_plane = 64;
  std::uint32_t pages_per_block = 128;
  std::uint32_t page_bytes = 16384;
  std::uint32_t sector_bytes = 4096;

  std::uint32_t planes_per_channel() const {
    return ways_per_channel * dies_per_way * planes_per_die;
  }
  std::uint32_t total_planes() const { return channels * planes_per_channel(); }
  std::uint32_t sectors_per_page() const { return page_bytes / sector_bytes; }
  std::uint64_t pages_per_plane() const {
    return std::uint64_t(blocks_per_plane) * pages_per_block;
  }
  std::uint64_t capacity_bytes() const {
    return std::uint64_t(total_planes()) * pages_per_plane() * page_bytes;
  }
  std::uint64_t capacity_sectors() const {
    return capacity_bytes() / sector_bytes;
  }

  // Throws ConfigError on zero dimensions or a page size that is not a
  // positive multiple of the sector size.
  void validate() const;
};

// Flash array and channel timing parameters. Defaults are representative
// TLC-class values; every field is config-overridable.
struct Timing {
  SimTime read_ns = 50000;        // array sense
  SimTime program_ns = 660000;    // array program
  SimTime erase_ns = 3500000;     // block erase
  double bus_bytes_per_ns = 0.4;  // channel transfer rate
  SimTime cmd_overhead_ns = 200;  // fixed per-command bus cost

  void validate() const;
};

// Position of a plane inside the device tree.
struct PlaneAddr {
  std::uint32_t channel = 0;
  std::uint32_t way = 0;
  std::uint32_t die = 0;
  std::uint32_t plane = 0;
  bool operator==(const PlaneAddr&) const = default;
};

// Flat plane index, channel-major: ((channel*W + way)*D + die)*P + plane.
inline std::uint32_t flat_plane(const Geometry& g, const PlaneAddr& a) {
  return ((a.channel * g.ways_per_channel + a.way) * g.dies_per_way + a.die) *
             g.planes_per_die +
         a.plane;
}

inline PlaneAddr unflatten_plane(const Geometry& g, std::uint32_t idx) {
  PlaneAddr a;
  a.plane = idx % g.planes_per_die;
  idx /= g.planes_per_die;
  a.die = idx % g.dies_per_way;
  idx /= g.dies_per_way;
  a.way = idx % g.ways_per_channel;
  a.channel = idx / g.ways_per_channel;
  return a;
}

// Channel-bus occupancy of moving `sectors` sectors plus command overhead:
// cmd_overhead_ns + ceil(sectors * sector_bytes / bus_bytes_per_ns).
// Computed as the smallest integer n with n * rate >= bytes so that the
// result never drifts off the mathematical ceiling by a floating-point ulp.
SimTime transfer_ns(const Geometry& g, const Timing& t, std::uint32_t sectors);

}  // namespace mqflash::flash
