#include "mqflash/gpu/trace.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"
#include "mqflash/util/errors.hpp"

namespace mqflash::gpu {

namespace {

using nlohmann::json;

[[noreturn]] void fail(std::uint64_t line, const std::string& what) {
  throw ParseError("trace line " + std::to_string(line) + ": " + what);
}

std::uint64_t require_count(const json& rec, const char* field,
                            std::uint64_t line) {
  auto it = rec.find(field);
  if (it == rec.end())
    fail(line, std::string("missing field '") + field + "'");
  if (!it->is_number_integer())
    fail(line, std::string("field '") + field + "' is not an integer");
  if (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)
    throw NegativeField("trace line " + std::to_string(line) + ": field '" +
                        field + "' is negative");
  return it->get<std::uint64_t>();
}

std::string require_text(const json& rec, const char* field,
                         std::uint64_t line) {
  auto it = rec.find(field);
  if (it == rec.end())
    fail(line, std::string("missing field '") + field + "'");
  if (!it->is_string())
    fail(line, std::string("field '") + field + "' is not a string");
  return it->get<std::string>();
}

Kernel parse_kernel(const json& rec, std::uint64_t line) {
  Kernel k;
  k.workload = require_text(rec, "workload", line);
  k.kernel_id = require_count(rec, "kernel", line);
  k.name = require_text(rec, "name", line);
  k.grid_blocks = require_count(rec, "grid", line);
  k.block_threads = require_count(rec, "block", line);
  k.exec_ns = require_count(rec, "exec_ns", line);
  if (k.grid_blocks < 1) fail(line, "grid must be >= 1");
  if (k.block_threads < 1) fail(line, "block must be >= 1");
  auto it = rec.find("ios");
  if (it == rec.end()) fail(line, "missing field 'ios'");
  if (!it->is_array()) fail(line, "field 'ios' is not an array");
  for (const auto& e : *it) {
    if (!e.is_object()) fail(line, "ios entry is not an object");
    KernelIo io;
    io.delta_ns = require_count(e, "delta_ns", line);
    io.offset_bytes = require_count(e, "offset", line);
    io.length_bytes = require_count(e, "len", line);
    const std::string op = require_text(e, "op", line);
    if (op == "R")
      io.op = host::IoOp::READ;
    else if (op == "W")
      io.op = host::IoOp::WRITE;
    else
      fail(line, "ios op must be \"R\" or \"W\", got \"" + op + "\"");
    k.ios.push_back(std::move(io));
  }
  return k;
}

}  // namespace

void Trace::index_workloads() {
  workload_names.clear();
  by_workload.clear();
  std::unordered_map<std::string, std::uint32_t> slot;
  for (std::uint32_t i = 0; i < kernels.size(); ++i) {
    auto [it, fresh] =
        slot.try_emplace(kernels[i].workload,
                         static_cast<std::uint32_t>(workload_names.size()));
    if (fresh) {
      workload_names.push_back(kernels[i].workload);
      by_workload.emplace_back();
    }
    by_workload[it->second].push_back(i);
  }
}

std::uint64_t Trace::total_exec_ns() const {
  std::uint64_t sum = 0;
  for (const auto& k : kernels) sum += k.exec_ns;
  return sum;
}

Trace load_trace(std::istream& in) {
  Trace tr;
  std::string raw;
  std::uint64_t line = 0;
  // Group header state: how many of the following records belong to the
  // group, and each record's replica count (largest-remainder split of
  // members over sampled).
  std::uint64_t group_left = 0;
  std::uint64_t group_base = 0;
  std::uint64_t group_extra = 0;
  std::uint64_t group_taken = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(raw);
    } catch (const json::exception& e) {
      fail(line, e.what());
    }
    if (!rec.is_object()) fail(line, "record is not an object");
    if (auto g = rec.find("group"); g != rec.end()) {
      if (group_left > 0)
        fail(line, "group header before previous group's records finished");
      if (!g->is_object()) fail(line, "group header is not an object");
      const std::uint64_t members = require_count(*g, "members", line);
      const std::uint64_t sampled = require_count(*g, "sampled", line);
      if (sampled < 1) fail(line, "group has sampled < 1");
      if (members < sampled) fail(line, "group has members < sampled");
      group_left = sampled;
      group_base = members / sampled;
      group_extra = members % sampled;
      group_taken = 0;
      continue;
    }
    Kernel k = parse_kernel(rec, line);
    if (group_left > 0) {
      std::uint64_t copies = group_base + (group_taken < group_extra ? 1 : 0);
      ++group_taken;
      --group_left;
      for (std::uint64_t c = 0; c + 1 < copies; ++c) tr.kernels.push_back(k);
      if (copies > 0) tr.kernels.push_back(std::move(k));
    } else {
      tr.kernels.push_back(std::move(k));
    }
  }
  if (group_left > 0)
    fail(line, "trace ended inside a group (" + std::to_string(group_left) +
                   " sampled records missing)");
  tr.index_workloads();
  return tr;
}

Trace load_trace_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoFailure("cannot open trace file " + p.string());
  return load_trace(in);
}

void write_trace(std::ostream& out, const std::vector<Kernel>& kernels) {
  for (const auto& k : kernels) {
    json ios = json::array();
    for (const auto& io : k.ios) {
      ios.push_back({{"delta_ns", io.delta_ns},
                     {"op", io.op == host::IoOp::READ ? "R" : "W"},
                     {"offset", io.offset_bytes},
                     {"len", io.length_bytes}});
    }
    json rec = {{"workload", k.workload}, {"kernel", k.kernel_id},
                {"name", k.name},         {"grid", k.grid_blocks},
                {"block", k.block_threads}, {"exec_ns", k.exec_ns},
                {"ios", std::move(ios)}};
    out << rec.dump() << '\n';
  }
}

void write_trace_file(const std::filesystem::path& p,
                      const std::vector<Kernel>& kernels) {
  std::ofstream out(p);
  if (!out) throw IoFailure("cannot open output trace file " + p.string());
  write_trace(out, kernels);
  out.flush();
  if (!out) throw IoFailure("failed writing trace file " + p.string());
}

}  // namespace mqflash::gpu
