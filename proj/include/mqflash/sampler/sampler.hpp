#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mqflash/gpu/trace.hpp"
#include "mqflash/util/rng.hpp"

namespace mqflash::sampler {

struct SamplerConfig {
  double epsilon = 0.05;        // relative error bound
  double cv_split_threshold = 0.2;
  std::uint32_t min_split_size = 4;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

// 95% confidence throughout.
inline constexpr double kZ = 1.96;

struct Group {
  std::string name;
  std::uint64_t grid = 1;
  std::uint64_t block = 1;
  std::vector<std::uint32_t> members;  // kernel indices, file order
  double mean_ns = 0;                  // population mean over members
  double var_ns2 = 0;                  // population variance over members
  std::uint32_t m_min = 1;
  std::vector<std::uint32_t> sampled;  // ascending subset of members
  double sample_mean_ns = 0;           // X-bar
  double sample_var_ns2 = 0;           // Bessel-corrected; 0 when m < 2 or m = N

  std::uint64_t n() const { return members.size(); }
};

struct Prediction {
  double total_ns = 0;    // Y
  double half_width = 0;  // z * sqrt(sum N_i^2 s_i^2 / m_i)
};

struct SampleOutcome {
  std::vector<Group> groups;
  Prediction prediction;
  std::uint64_t kernels_in = 0;
  std::uint64_t records_out = 0;  // sampled records across groups
};

// Partition by exact (name, grid, block) key, first-appearance order.
std::vector<Group> group_kernels(const gpu::Trace& trace);

// Recursive 1-D 2-means refinement. Groups below min_split_size or with
// CV <= threshold come back unchanged, as does any degenerate split (all
// values equal, or one side empty). Results keep value order: the low-mean
// half precedes the high-mean half.
std::vector<Group> split_group(const Group& g, const gpu::Trace& trace,
                               const SamplerConfig& cfg);

// CLT sample-size bound: clamp(ceil((z*sigma/(eps*mu))^2), 1, N); sigma=0
// gives 1. Throws ZeroMeanPositiveVariance when mu=0 with spread.
std::uint32_t min_samples(const Group& g, const SamplerConfig& cfg);

// Uniform sample of m members without replacement; fills sampled/X-bar/s^2.
void sample_group(Group& g, std::uint32_t m, const gpu::Trace& trace,
                  util::Rng& rng);

Prediction predict_total(const std::vector<Group>& groups);

// Full pipeline: group, split, size, sample (each group from its own seed
// stream, so per-group work is order-independent), predict.
SampleOutcome run_sampler(const gpu::Trace& trace, const SamplerConfig& cfg);

// One header line {"group":{...,"members":N,"sampled":m}} per group, then
// its sampled records; load_trace replays each group back to N kernels.
void emit_sampled_trace(const SampleOutcome& out, const gpu::Trace& trace,
                        std::ostream& sink);

}  // namespace mqflash::sampler
