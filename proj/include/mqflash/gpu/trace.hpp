#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mqflash/host/request.hpp"

namespace mqflash::gpu {

using sim::SimTime;

struct KernelIo {
  SimTime delta_ns = 0;  // offset from kernel start
  host::IoOp op = host::IoOp::READ;
  std::uint64_t offset_bytes = 0;
  std::uint64_t length_bytes = 0;
};

struct Kernel {
  std::string workload;
  std::uint64_t kernel_id = 0;
  std::string name;
  std::uint64_t grid_blocks = 1;   // thread blocks (n_blocks)
  std::uint64_t block_threads = 1;
  SimTime exec_ns = 0;
  std::vector<KernelIo> ios;
};

struct Trace {
  std::vector<Kernel> kernels;
  // Workloads in first-appearance order, with their kernel indices in
  // file order.
  std::vector<std::string> workload_names;
  std::vector<std::vector<std::uint32_t>> by_workload;

  void index_workloads();
  std::uint64_t total_exec_ns() const;
};

// JSON-lines ingest: one record per line with fields workload, kernel, name,
// grid, block, exec_ns, ios (array of {delta_ns, op:"R"|"W", offset, len}).
// A compacted trace additionally carries group header lines
// {"group":{...,"members":N,"sampled":m}}: the m records that follow are
// replicated back to N kernels by largest-remainder weighting.
// Throws ParseError carrying the 1-based line number; integer fields that
// must be non-negative throw NegativeField.
Trace load_trace(std::istream& in);
Trace load_trace_file(const std::filesystem::path& p);

void write_trace(std::ostream& out, const std::vector<Kernel>& kernels);
void write_trace_file(const std::filesystem::path& p,
                      const std::vector<Kernel>& kernels);

}  // namespace mqflash::gpu
