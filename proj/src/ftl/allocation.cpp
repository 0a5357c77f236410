#include "mqflash/ftl/allocation.hpp"

#include <array>

#include "mqflash/util/errors.hpp"

namespace mqflash::ftl {

std::vector<flash::PlaneAddr> plane_order(Scheme s, const flash::Geometry& g) {
  // Axis ids 0=channel 1=way 2=die 3=plane, listed fastest-varying first.
  static constexpr std::array<std::array<int, 4>, 3> kAxes = {{
      {0, 1, 2, 3},  // CWDP
      {0, 2, 1, 3},  // CDWP
      {1, 0, 2, 3},  // WCDP
  }};
  const auto& axes = kAxes[static_cast<int>(s)];
  const std::array<std::uint32_t, 4> dim = {g.channels, g.ways_per_channel,
                                            g.dies_per_way, g.planes_per_die};
  std::vector<flash::PlaneAddr> out;
  out.reserve(g.total_planes());
  for (std::uint32_t i = 0; i < g.total_planes(); ++i) {
    std::uint32_t rem = i;
    std::array<std::uint32_t, 4> coord{};
    for (int k = 0; k < 4; ++k) {
      const int axis = axes[k];
      coord[axis] = rem % dim[axis];
      rem /= dim[axis];
    }
    out.push_back({coord[0], coord[1], coord[2], coord[3]});
  }
  return out;
}

const char* to_string(Mapping m) {
  return m == Mapping::COARSE ? "coarse" : "fine";
}
const char* to_string(Allocation a) {
  return a == Allocation::STATIC ? "static" : "dynamic";
}
const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::CWDP: return "cwdp";
    case Scheme::CDWP: return "cdwp";
    case Scheme::WCDP: return "wcdp";
  }
  return "?";
}

Mapping mapping_from_string(const std::string& s) {
  if (s == "coarse") return Mapping::COARSE;
  if (s == "fine") return Mapping::FINE;
  throw ConfigError("unknown mapping '" + s + "' (want coarse|fine)");
}

Allocation allocation_from_string(const std::string& s) {
  if (s == "static") return Allocation::STATIC;
  if (s == "dynamic") return Allocation::DYNAMIC;
  throw ConfigError("unknown allocation '" + s + "' (want static|dynamic)");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "cwdp") return Scheme::CWDP;
  if (s == "cdwp") return Scheme::CDWP;
  if (s == "wcdp") return Scheme::WCDP;
  throw ConfigError("unknown scheme '" + s + "' (want cwdp|cdwp|wcdp)");
}

}  // namespace mqflash::ftl
