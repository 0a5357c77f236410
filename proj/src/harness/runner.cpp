#include "mqflash/harness/runner.hpp"

#include <algorithm>
#include <future>

#include "mqflash/gpu/frontend.hpp"
#include "mqflash/metrics/collector.hpp"
#include "mqflash/util/errors.hpp"

namespace mqflash::harness {

metrics::Row run_trace(const RunConfig& cfg, const gpu::Trace& trace,
                       const std::string& workload_label) {
  DeviceConfig dev_cfg = cfg.device;
  if (dev_cfg.queue_count == 0)
    dev_cfg.queue_count = std::max<std::uint32_t>(
        1, static_cast<std::uint32_t>(trace.by_workload.size()));

  sim::Engine eng;
  SsdDevice dev(eng, dev_cfg);
  gpu::Frontend fe(eng, dev, trace, cfg.sched);
  fe.start();
  const sim::SimTime end_ns = dev.drain();

  const metrics::Collector& m = dev.metrics();
  metrics::Row row;
  row.workload = workload_label;
  row.policy = gpu::to_string(cfg.sched.policy);
  row.scheme = ftl::to_string(dev_cfg.scheme);
  row.mapping = ftl::to_string(dev_cfg.mapping);
  row.allocation = ftl::to_string(dev_cfg.allocation);
  row.iops = end_ns > 0 ? metrics::iops(m.completed(), end_ns) : 0.0;
  row.resp_mean_ns = m.response().mean();
  row.resp_p50_ns = m.response().quantile(0.50);
  row.resp_p99_ns = m.response().quantile(0.99);
  row.resp_max_ns = m.response().max_value();
  row.sim_end_ns = end_ns;
  row.reads = m.txns().reads;
  row.programs = m.txns().programs;
  row.erases = m.txns().erases;
  row.rmw_reads = m.txns().rmw_reads;
  row.waf = m.waf();
  row.per_plane_busy_ns = dev.backend().plane_busy_ns();
  return row;
}

std::vector<metrics::Row> run_sweep(const RunConfig& cfg,
                                    const gpu::Trace& trace,
                                    const std::string& workload_label,
                                    const std::vector<gpu::Policy>& policies,
                                    const std::vector<ftl::Scheme>& schemes) {
  if (policies.empty() || schemes.empty())
    throw ConfigError("sweep needs at least one policy and one scheme");
  struct Cell {
    RunConfig cfg;
    std::string label;
  };
  std::vector<Cell> cells;
  for (gpu::Policy p : policies) {
    for (ftl::Scheme s : schemes) {
      Cell c{cfg, gpu::to_string(p) + "/" + ftl::to_string(s)};
      c.cfg.sched.policy = p;
      c.cfg.device.scheme = s;
      cells.push_back(std::move(c));
    }
  }
  std::vector<std::future<metrics::Row>> futures;
  futures.reserve(cells.size());
  for (const Cell& c : cells) {
    futures.push_back(std::async(std::launch::async, [&c, &trace,
                                                      &workload_label] {
      return run_trace(c.cfg, trace, workload_label);
    }));
  }
  std::vector<metrics::Row> rows;
  rows.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      rows.push_back(futures[i].get());
    } catch (const std::exception& e) {
      throw SimError("sweep cell " + cells[i].label + ": " + e.what());
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const metrics::Row& a, const metrics::Row& b) {
              return a.cell_label() < b.cell_label();
            });
  return rows;
}

ReportPaths write_report(const std::filesystem::path& out_dir,
                         const std::vector<metrics::Row>& rows) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
    throw IoFailure("cannot create output directory " + out_dir.string() +
                    ": " + ec.message());
  ReportPaths paths;
  paths.csv = out_dir / "results.csv";
  metrics::write_csv(paths.csv, rows);
  paths.charts = metrics::write_charts(out_dir, rows);
  paths.maxima = out_dir / "maxima.txt";
  metrics::write_maxima(paths.maxima, rows);
  return paths;
}

}  // namespace mqflash::harness
