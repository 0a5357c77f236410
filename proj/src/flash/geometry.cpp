#include "mqflash/flash/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mqflash/util/errors.hpp"

namespace mqflash::flash {

void Geometry::validate() const {
  auto need = [](std::uint64_t v, const char* what) {
    if (v == 0) throw ConfigError(std::string(what) + " must be >= 1");
  };
  need(channels, "channels");
  need(ways_per_channel, "ways_per_channel");
  need(dies_per_way, "dies_per_way");
  need(planes_per_die, "planes_per_die");
  need(blocks_per_plane, "blocks_per_plane");
  need(pages_per_block, "pages_per_block");
  need(page_bytes, "page_bytes");
  need(sector_bytes, "sector_bytes");
  if (page_bytes % sector_bytes != 0)
    throw ConfigError("page_bytes (" + std::to_string(page_bytes) +
                      ") must be a multiple of sector_bytes (" +
                      std::to_string(sector_bytes) + ")");
}

void Timing::validate() const {
  if (read_ns == 0 || program_ns == 0 || erase_ns == 0)
    throw ConfigError("read_ns, program_ns and erase_ns must be positive");
  if (!(bus_bytes_per_ns > 0.0))
    throw ConfigError("bus_bytes_per_ns must be positive");
}

SimTime transfer_ns(const Geometry& g, const Timing& t, std::uint32_t sectors) {
  if (sectors == 0 || sectors > g.sectors_per_page())
    throw std::invalid_argument("transfer_ns: sector count " +
                                std::to_string(sectors) +
                                " outside [1, sectors_per_page]");
  const double bytes = double(sectors) * double(g.sector_bytes);
  const double rate = t.bus_bytes_per_ns;
  SimTime n = SimTime(std::floor(bytes / rate));
  while (double(n) * rate < bytes) ++n;
  while (n > 0 && double(n - 1) * rate >= bytes) --n;
  return t.cmd_overhead_ns + n;
}

}  // namespace mqflash::flash
