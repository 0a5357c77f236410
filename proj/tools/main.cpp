#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mqflash/gpu/trace.hpp"
#include "mqflash/harness/config.hpp"
#include "mqflash/harness/runner.hpp"
#include "mqflash/sampler/sampler.hpp"
#include "mqflash/synth/generators.hpp"
#include "mqflash/util/errors.hpp"

namespace {

using namespace mqflash;

struct CommonArgs {
  std::string config_file;
  std::vector<std::string> trace_files;
  std::vector<std::string> overrides;  // key=value
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool needs_trace) {
  cmd->add_option("--config", a.config_file, "flat key=value config file");
  auto* tr = cmd->add_option("--trace", a.trace_files,
                             "trace file (repeatable; merged in order)");
  if (needs_trace) tr->required();
  cmd->add_option("--set", a.overrides,
                  "override one config key, e.g. --set channels=4")
      ->type_name("KEY=VALUE");
  cmd->add_option("--out", a.out, "output directory")
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "seed override")
      ->each([&a](const std::string&) { a.seed_set = true; });
}

harness::RunConfig build_config(const CommonArgs& a) {
  harness::RunConfig cfg;
  if (!a.config_file.empty())
    cfg = harness::load_config_file(a.config_file);
  for (const std::string& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    harness::apply_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (a.seed_set) cfg.seed = a.seed;
  return cfg;
}

gpu::Trace load_traces(const std::vector<std::string>& files,
                       std::string& label) {
  gpu::Trace merged;
  label.clear();
  for (const std::string& f : files) {
    gpu::Trace t = gpu::load_trace_file(f);
    merged.kernels.insert(merged.kernels.end(),
                          std::make_move_iterator(t.kernels.begin()),
                          std::make_move_iterator(t.kernels.end()));
    if (!label.empty()) label += "+";
    label += std::filesystem::path(f).stem().string();
  }
  merged.index_workloads();
  return merged;
}

void print_rows(const std::vector<metrics::Row>& rows,
                const harness::ReportPaths& paths) {
  for (const auto& r : rows) {
    std::printf("%s %s: iops=%.3f resp_mean_ns=%.3f sim_end_ns=%llu\n",
                r.workload.c_str(), r.cell_label().c_str(), r.iops,
                r.resp_mean_ns, static_cast<unsigned long long>(r.sim_end_ns));
  }
  std::printf("report: %s\n", paths.csv.string().c_str());
}

int cmd_run(const CommonArgs& a) {
  harness::RunConfig cfg = build_config(a);
  std::string label;
  gpu::Trace trace = load_traces(a.trace_files, label);
  std::vector<metrics::Row> rows = {harness::run_trace(cfg, trace, label)};
  auto paths = harness::write_report(a.out, rows);
  print_rows(rows, paths);
  return 0;
}

int cmd_sweep(const CommonArgs& a, const std::string& policies_csv,
              const std::string& schemes_csv) {
  harness::RunConfig cfg = build_config(a);
  std::string label;
  gpu::Trace trace = load_traces(a.trace_files, label);
  std::vector<gpu::Policy> policies;
  std::vector<ftl::Scheme> schemes;
  for (std::size_t b = 0, e; b < policies_csv.size(); b = e + 1) {
    e = std::min(policies_csv.find(',', b), policies_csv.size());
    policies.push_back(gpu::policy_from_string(policies_csv.substr(b, e - b)));
  }
  for (std::size_t b = 0, e; b < schemes_csv.size(); b = e + 1) {
    e = std::min(schemes_csv.find(',', b), schemes_csv.size());
    schemes.push_back(ftl::scheme_from_string(schemes_csv.substr(b, e - b)));
  }
  auto rows = harness::run_sweep(cfg, trace, label, policies, schemes);
  auto paths = harness::write_report(a.out, rows);
  print_rows(rows, paths);
  std::printf("maxima: %s\n", paths.maxima.string().c_str());
  return 0;
}

int cmd_synth(const std::string& kind, const synth::SynthParams& p,
              const std::string& out_file) {
  auto kernels = synth::make_trace(kind, p);
  gpu::write_trace_file(out_file, kernels);
  std::printf("%s: %zu records -> %s\n", kind.c_str(), kernels.size(),
              out_file.c_str());
  return 0;
}

int cmd_sample(const std::string& trace_file, double epsilon,
               std::uint64_t seed, const std::string& out_file) {
  gpu::Trace trace = gpu::load_trace_file(trace_file);
  sampler::SamplerConfig cfg;
  cfg.epsilon = epsilon;
  cfg.rng_seed = seed;
  sampler::SampleOutcome out = sampler::run_sampler(trace, cfg);
  std::ofstream sink(out_file);
  if (!sink) throw IoFailure("cannot open " + out_file + " for writing");
  sampler::emit_sampled_trace(out, trace, sink);
  const double ratio =
      out.records_out ? double(out.kernels_in) / double(out.records_out) : 0;
  std::printf("groups=%zu kernels_in=%llu records_out=%llu\n",
              out.groups.size(),
              static_cast<unsigned long long>(out.kernels_in),
              static_cast<unsigned long long>(out.records_out));
  std::printf("predicted_total_ns=%.1f half_width_ns=%.1f compression=%.1fx\n",
              out.prediction.total_ns, out.prediction.half_width, ratio);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-queue SSD simulator for GPU kernel I/O workloads"};
  app.require_subcommand(1);

  CommonArgs run_args;
  auto* run = app.add_subcommand("run", "play trace(s) through one device");
  add_common(run, run_args, true);

  CommonArgs sweep_args;
  std::string policies_csv = "rr,large_chunk";
  std::string schemes_csv = "cwdp,cdwp,wcdp";
  auto* sweep =
      app.add_subcommand("sweep", "policy x scheme grid over one trace set");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--policies", policies_csv, "comma list of policies")
      ->capture_default_str();
  sweep->add_option("--schemes", schemes_csv, "comma list of schemes")
      ->capture_default_str();

  std::string synth_kind;
  std::string synth_out = "trace.jsonl";
  synth::SynthParams synth_params;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic trace");
  synth_cmd->add_option("--kind", synth_kind, "generator name")->required();
  synth_cmd->add_option("--kernels", synth_params.kernels, "kernel count")
      ->capture_default_str();
  synth_cmd
      ->add_option("--space-bytes", synth_params.space_bytes,
                   "addressable window")
      ->capture_default_str();
  synth_cmd->add_option("--io-bytes", synth_params.io_bytes, "I/O unit size")
      ->capture_default_str();
  synth_cmd
      ->add_option("--workload", synth_params.workload, "workload name")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_params.seed, "generator seed")
      ->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "output trace file")
      ->capture_default_str();

  std::string sample_trace;
  std::string sample_out = "sampled.jsonl";
  double sample_epsilon = 0.05;
  std::uint64_t sample_seed = 1;
  auto* sample =
      app.add_subcommand("sample", "compact a trace by statistical sampling");
  sample->add_option("--trace", sample_trace, "input trace file")->required();
  sample->add_option("--epsilon", sample_epsilon, "relative error bound")
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "sampler seed")
      ->capture_default_str();
  sample->add_option("--out", sample_out, "output compacted trace")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args, policies_csv, schemes_csv);
    if (synth_cmd->parsed()) return cmd_synth(synth_kind, synth_params, synth_out);
    if (sample->parsed())
      return cmd_sample(sample_trace, sample_epsilon, sample_seed, sample_out);
  } catch (const SimError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
