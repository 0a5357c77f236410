#include "mqflash/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "mqflash/util/errors.hpp"

namespace mqflash::metrics {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& file, const std::string& body) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoFailure("cannot open " + file.string() + " for writing");
  out << body;
  out.flush();
  if (!out) throw IoFailure("failed writing " + file.string());
}

struct Family {
  const char* file;
  const char* title;
  const char* unit;
  double (*value)(const Row&);
};

const Family kFamilies[] = {
    {"iops.svg", "IOPS by Workload", "IOPS",
     [](const Row& r) { return r.iops; }},
    {"response.svg", "Device Response Time by Workload", "mean ns",
     [](const Row& r) { return r.resp_mean_ns; }},
    {"end_time.svg", "Simulation End Time by Workload", "ns",
     [](const Row& r) { return double(r.sim_end_ns); }},
};

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                          "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                          "#9c755f", "#bab0ac"};

std::string render_chart(const Family& fam, const std::vector<Row>& rows) {
  // Bars grouped by workload, in first-appearance order; one bar per row.
  std::vector<std::string> groups;
  std::vector<std::vector<const Row*>> per_group;
  for (const Row& r : rows) {
    auto it = std::find(groups.begin(), groups.end(), r.workload);
    if (it == groups.end()) {
      groups.push_back(r.workload);
      per_group.emplace_back();
      it = groups.end() - 1;
    }
    per_group[std::size_t(it - groups.begin())].push_back(&r);
  }
  // Distinct cell labels, in first-appearance order, for color and legend.
  std::vector<std::string> cells;
  for (const Row& r : rows) {
    const std::string label = r.cell_label();
    if (std::find(cells.begin(), cells.end(), label) == cells.end())
      cells.push_back(label);
  }

  double vmax = 0;
  for (const Row& r : rows) vmax = std::max(vmax, fam.value(r));
  if (vmax <= 0) vmax = 1;

  const int bar_w = 34, bar_gap = 6, group_gap = 40;
  const int plot_h = 320, margin_l = 90, margin_t = 70;
  const int legend_h = 22 * int(cells.size()) + 16;
  int x = margin_l;
  std::string bars;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const int group_x0 = x;
    for (const Row* r : per_group[g]) {
      const double v = fam.value(*r);
      const int h = int(v / vmax * plot_h + 0.5);
      const std::string label = r->cell_label();
      const std::size_t ci =
          std::size_t(std::find(cells.begin(), cells.end(), label) -
                      cells.begin());
      bars += "<rect x=\"" + std::to_string(x) + "\" y=\"" +
              std::to_string(margin_t + plot_h - h) + "\" width=\"" +
              std::to_string(bar_w) + "\" height=\"" + std::to_string(h) +
              "\" fill=\"" + kPalette[ci % 10] + "\"/>\n";
      bars += "<text x=\"" + std::to_string(x + bar_w / 2) + "\" y=\"" +
              std::to_string(margin_t + plot_h - h - 6) +
              "\" font-size=\"10\" text-anchor=\"middle\">" +
              fixed(v, v >= 100 ? 0 : 2) + "</text>\n";
      x += bar_w + bar_gap;
    }
    const int group_x1 = x - bar_gap;
    bars += "<text x=\"" + std::to_string((group_x0 + group_x1) / 2) +
            "\" y=\"" + std::to_string(margin_t + plot_h + 20) +
            "\" font-size=\"12\" text-anchor=\"middle\">" +
            xml_escape(groups[g]) + "</text>\n";
    x += group_gap;
  }
  const int width = std::max(x - group_gap + 30, 420);
  const int height = margin_t + plot_h + 40 + legend_h;

  std::string legend;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const int ly = margin_t + plot_h + 44 + int(i) * 22;
    legend += "<rect x=\"" + std::to_string(margin_l) + "\" y=\"" +
              std::to_string(ly) + "\" width=\"14\" height=\"14\" fill=\"" +
              kPalette[i % 10] + "\"/>\n";
    legend += "<text x=\"" + std::to_string(margin_l + 20) + "\" y=\"" +
              std::to_string(ly + 11) + "\" font-size=\"12\">" +
              xml_escape(cells[i]) + "</text>\n";
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) +
         "\" font-family=\"monospace\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(width / 2) +
         "\" y=\"28\" font-size=\"16\" text-anchor=\"middle\">" +
         xml_escape(fam.title) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + std::to_string(margin_t + plot_h / 2) +
         "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "18 " +
         std::to_string(margin_t + plot_h / 2) + ")\">" +
         xml_escape(fam.unit) + "</text>\n";
  // Axis, a max-value gridline, and a zero line.
  svg += "<line x1=\"" + std::to_string(margin_l - 10) + "\" y1=\"" +
         std::to_string(margin_t + plot_h) + "\" x2=\"" +
         std::to_string(width - 15) + "\" y2=\"" +
         std::to_string(margin_t + plot_h) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + std::to_string(margin_l - 10) + "\" y1=\"" +
         std::to_string(margin_t) + "\" x2=\"" + std::to_string(width - 15) +
         "\" y2=\"" + std::to_string(margin_t) +
         "\" stroke=\"#cccccc\" stroke-dasharray=\"4 3\"/>\n";
  svg += "<text x=\"" + std::to_string(margin_l - 14) + "\" y=\"" +
         std::to_string(margin_t + 4) +
         "\" font-size=\"10\" text-anchor=\"end\">" + fixed(vmax, 0) +
         "</text>\n";
  svg += bars;
  svg += legend;
  svg += "</svg>\n";
  return svg;
}

}  // namespace

std::string Row::cell_label() const {
  return policy + "/" + scheme + "/" + mapping + "/" + allocation;
}

std::string render_csv(const std::vector<Row>& rows) {
  std::string out =
      "workload,policy,scheme,mapping,allocation,iops,resp_mean_ns,"
      "resp_p50_ns,resp_p99_ns,resp_max_ns,sim_end_ns,reads,programs,erases,"
      "rmw_reads,waf\n";
  for (const Row& r : rows) {
    out += r.workload + "," + r.policy + "," + r.scheme + "," + r.mapping +
           "," + r.allocation + "," + fixed(r.iops, 3) + "," +
           fixed(r.resp_mean_ns, 3) + "," + std::to_string(r.resp_p50_ns) +
           "," + std::to_string(r.resp_p99_ns) + "," +
           std::to_string(r.resp_max_ns) + "," +
           std::to_string(r.sim_end_ns) + "," + std::to_string(r.reads) +
           "," + std::to_string(r.programs) + "," +
           std::to_string(r.erases) + "," + std::to_string(r.rmw_reads) +
           "," + fixed(r.waf, 6) + "\n";
  }
  return out;
}

void write_csv(const std::filesystem::path& file,
               const std::vector<Row>& rows) {
  write_file(file, render_csv(rows));
}

std::vector<std::filesystem::path> write_charts(
    const std::filesystem::path& dir, const std::vector<Row>& rows) {
  std::vector<std::filesystem::path> written;
  for (const Family& fam : kFamilies) {
    const auto path = dir / fam.file;
    write_file(path, render_chart(fam, rows));
    written.push_back(path);
  }
  return written;
}

void write_maxima(const std::filesystem::path& file,
                  const std::vector<Row>& rows) {
  std::string body;
  if (!rows.empty()) {
    const Row* best_iops = &rows[0];
    const Row* best_resp = &rows[0];
    const Row* best_end = &rows[0];
    for (const Row& r : rows) {
      if (r.iops > best_iops->iops) best_iops = &r;
      if (r.resp_mean_ns < best_resp->resp_mean_ns) best_resp = &r;
      if (r.sim_end_ns < best_end->sim_end_ns) best_end = &r;
    }
    body += "best_iops: workload=" + best_iops->workload + " cell=" +
            best_iops->cell_label() + " value=" + fixed(best_iops->iops, 3) +
            "\n";
    body += "best_response: workload=" + best_resp->workload + " cell=" +
            best_resp->cell_label() +
            " value=" + fixed(best_resp->resp_mean_ns, 3) + "\n";
    body += "best_end_time: workload=" + best_end->workload + " cell=" +
            best_end->cell_label() +
            " value=" + std::to_string(best_end->sim_end_ns) + "\n";
  }
  write_file(file, body);
}

}  // namespace mqflash::metrics
