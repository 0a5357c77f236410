#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mqflash/gpu/trace.hpp"
#include "mqflash/harness/config.hpp"
#include "mqflash/metrics/report.hpp"

namespace mqflash::harness {

// Plays one trace through a fresh engine + device + frontend and reduces the
// run to a report row labeled with `workload_label`.
metrics::Row run_trace(const RunConfig& cfg, const gpu::Trace& trace,
                       const std::string& workload_label);

// Cartesian product of policies x schemes, each cell on an isolated engine
// (cells run in parallel), rows sorted by cell label. A cell failure is
// rethrown with its label prefixed.
std::vector<metrics::Row> run_sweep(const RunConfig& cfg,
                                    const gpu::Trace& trace,
                                    const std::string& workload_label,
                                    const std::vector<gpu::Policy>& policies,
                                    const std::vector<ftl::Scheme>& schemes);

struct ReportPaths {
  std::filesystem::path csv;
  std::vector<std::filesystem::path> charts;
  std::filesystem::path maxima;
};

// results.csv, three charts, and maxima.txt under out_dir (created if
// needed).
ReportPaths write_report(const std::filesystem::path& out_dir,
                         const std::vector<metrics::Row>& rows);

}  // namespace mqflash::harness
