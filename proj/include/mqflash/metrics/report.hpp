#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mqflash::metrics {

// One row of the results table: the identifying cell labels plus the three
// headline metrics and the flash-side counters behind them.
struct Row {
  std::string workload;
  std::string policy;
  std::string scheme;
  std::string mapping;
  std::string allocation;
  double iops = 0;
  double resp_mean_ns = 0;
  std::uint64_t resp_p50_ns = 0;
  std::uint64_t resp_p99_ns = 0;
  std::uint64_t resp_max_ns = 0;
  std::uint64_t sim_end_ns = 0;
  std::uint64_t reads = 0;
  std::uint64_t programs = 0;
  std::uint64_t erases = 0;
  std::uint64_t rmw_reads = 0;
  double waf = 0;
  std::vector<std::uint64_t> per_plane_busy_ns;  // not part of the CSV

  // "policy/scheme/mapping/allocation", used for sorting and chart legends.
  std::string cell_label() const;
};

// Fixed, documented column order; byte-identical for identical rows.
std::string render_csv(const std::vector<Row>& rows);

void write_csv(const std::filesystem::path& file, const std::vector<Row>& rows);

// Three grouped bar charts (self-contained SVG, deterministic bytes):
// iops.svg, response.svg, end_time.svg. Bars grouped by workload, one bar
// per cell. Returns the written paths.
std::vector<std::filesystem::path> write_charts(
    const std::filesystem::path& dir, const std::vector<Row>& rows);

// maxima.txt: the best cell per metric family (highest IOPS, lowest mean
// response, lowest end time); first row wins ties.
void write_maxima(const std::filesystem::path& file,
                  const std::vector<Row>& rows);

}  // namespace mqflash::metrics
