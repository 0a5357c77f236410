#include "mqflash/host/queue.hpp"

#include <string>

#include "mqflash/util/errors.hpp"

namespace mqflash::host {

std::vector<Fragment> split_request(const flash::Geometry& g,
                                    std::uint64_t offset_bytes,
                                    std::uint64_t length_bytes) {
  if (length_bytes == 0) throw UnalignedAccess("zero-length request");
  if (offset_bytes % g.sector_bytes != 0 ||
      length_bytes % g.sector_bytes != 0)
    throw UnalignedAccess(
        "offset " + std::to_string(offset_bytes) + " / length " +
        std::to_string(length_bytes) + " not multiples of sector size " +
        std::to_string(g.sector_bytes));
  const std::uint32_t spp = g.sectors_per_page();
  std::uint64_t first = offset_bytes / g.sector_bytes;
  std::uint64_t left = length_bytes / g.sector_bytes;
  std::vector<Fragment> out;
  while (left > 0) {
    const std::uint64_t room = spp - first % spp;
    const std::uint32_t take = std::uint32_t(std::min(left, room));
    out.push_back({first, take});
    first += take;
    left -= take;
  }
  return out;
}

}  // namespace mqflash::host
