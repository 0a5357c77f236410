#pragma once

#include <string>
#include <vector>

#include "mqflash/flash/geometry.hpp"

namespace mqflash::ftl {

enum class Mapping : std::uint8_t { COARSE, FINE };
enum class Allocation : std::uint8_t { STATIC, DYNAMIC };
enum class Scheme : std::uint8_t { CWDP, CDWP, WCDP };

// Plane visit order for allocation. The scheme name lists the axes from
// fastest-varying to slowest: CWDP walks channels first, then ways, then
// dies, then planes; CDWP promotes die interleaving over way pipelining;
// WCDP spreads across ways before channels.
std::vector<flash::PlaneAddr> plane_order(Scheme s, const flash::Geometry& g);

const char* to_string(Mapping m);
const char* to_string(Allocation a);
const char* to_string(Scheme s);

// All three throw ConfigError on unknown names.
Mapping mapping_from_string(const std::string& s);
Allocation allocation_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);

}  // namespace mqflash::ftl
