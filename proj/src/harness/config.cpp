#include "mqflash/harness/config.hpp"

#include <fstream>
#include <istream>

#include "mqflash/util/errors.hpp"

namespace mqflash::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + value +
                      "' is not a non-negative integer");
  }
  if (used != value.size() || value[0] == '-')
    throw ConfigError("key '" + key + "': '" + value +
                      "' is not a non-negative integer");
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  }
  if (used != value.size())
    throw ConfigError("key '" + key + "': '" + value + "' is not a number");
  return v;
}

std::uint32_t parse_u32(const std::string& key, const std::string& value) {
  const std::uint64_t v = parse_count(key, value);
  if (v > 0xFFFFFFFFull)
    throw ConfigError("key '" + key + "': value " + value + " out of range");
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void apply_kv(RunConfig& cfg, const std::string& key,
              const std::string& value) {
  auto& g = cfg.device.geometry;
  auto& t = cfg.device.timing;
  if (key == "channels") g.channels = parse_u32(key, value);
  else if (key == "ways_per_channel") g.ways_per_channel = parse_u32(key, value);
  else if (key == "dies_per_way") g.dies_per_way = parse_u32(key, value);
  else if (key == "planes_per_die") g.planes_per_die = parse_u32(key, value);
  else if (key == "blocks_per_plane") g.blocks_per_plane = parse_u32(key, value);
  else if (key == "pages_per_block") g.pages_per_block = parse_u32(key, value);
  else if (key == "page_bytes") g.page_bytes = parse_u32(key, value);
  else if (key == "sector_bytes") g.sector_bytes = parse_u32(key, value);
  else if (key == "read_ns") t.read_ns = parse_count(key, value);
  else if (key == "program_ns") t.program_ns = parse_count(key, value);
  else if (key == "erase_ns") t.erase_ns = parse_count(key, value);
  else if (key == "bus_bytes_per_ns") t.bus_bytes_per_ns = parse_real(key, value);
  else if (key == "cmd_overhead_ns") t.cmd_overhead_ns = parse_count(key, value);
  else if (key == "mapping") cfg.device.mapping = ftl::mapping_from_string(value);
  else if (key == "allocation")
    cfg.device.allocation = ftl::allocation_from_string(value);
  else if (key == "scheme") cfg.device.scheme = ftl::scheme_from_string(value);
  else if (key == "gc_free_threshold") {
    const double v = parse_real(key, value);
    if (v < 0.0 || v >= 1.0)
      throw ConfigError("key 'gc_free_threshold': must be in [0, 1)");
    cfg.device.gc.free_threshold = v;
    cfg.device.gc.enabled = v > 0.0;
  } else if (key == "queue_depth") cfg.device.queue_depth = parse_u32(key, value);
  else if (key == "queue_count") cfg.device.queue_count = parse_u32(key, value);
  else if (key == "policy") cfg.sched.policy = gpu::policy_from_string(value);
  else if (key == "block_stride") cfg.sched.block_stride = parse_count(key, value);
  else if (key == "core_count") cfg.sched.core_count = parse_count(key, value);
  else if (key == "chunk_len") cfg.sched.chunk_len = parse_u32(key, value);
  else if (key == "seed") cfg.seed = parse_count(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string raw;
  std::uint64_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line) +
                        ": expected key=value, got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line) +
                        ": empty key");
    apply_kv(cfg, key, value);
  }
  return cfg;
}

RunConfig load_config_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open config file " + p.string());
  return parse_config(in);
}

}  // namespace mqflash::harness
