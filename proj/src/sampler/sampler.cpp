#include "mqflash/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"
#include "mqflash/util/errors.hpp"

namespace mqflash::sampler {

namespace {

double exec_of(const gpu::Trace& t, std::uint32_t idx) {
  return static_cast<double>(t.kernels[idx].exec_ns);
}

void fill_stats(Group& g, const gpu::Trace& t) {
  double sum = 0;
  for (auto i : g.members) sum += exec_of(t, i);
  g.mean_ns = sum / static_cast<double>(g.n());
  double acc = 0;
  for (auto i : g.members) {
    const double d = exec_of(t, i) - g.mean_ns;
    acc += d * d;
  }
  g.var_ns2 = acc / static_cast<double>(g.n());
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

void SamplerConfig::validate() const {
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw ConfigError("epsilon must be in (0, 1)");
  if (!(cv_split_threshold > 0.0))
    throw ConfigError("cv_split_threshold must be > 0");
  if (min_split_size < 2) throw ConfigError("min_split_size must be >= 2");
}

std::vector<Group> group_kernels(const gpu::Trace& trace) {
  std::vector<Group> groups;
  std::map<std::tuple<std::string, std::uint64_t, std::uint64_t>, std::size_t>
      slot;
  for (std::uint32_t i = 0; i < trace.kernels.size(); ++i) {
    const auto& k = trace.kernels[i];
    auto key = std::make_tuple(k.name, k.grid_blocks, k.block_threads);
    auto [it, fresh] = slot.try_emplace(std::move(key), groups.size());
    if (fresh) {
      Group g;
      g.name = k.name;
      g.grid = k.grid_blocks;
      g.block = k.block_threads;
      groups.push_back(std::move(g));
    }
    groups[it->second].members.push_back(i);
  }
  for (auto& g : groups) fill_stats(g, trace);
  return groups;
}

std::vector<Group> split_group(const Group& g, const gpu::Trace& trace,
                               const SamplerConfig& cfg) {
  cfg.validate();
  const double sigma = std::sqrt(g.var_ns2);
  const double cv = g.mean_ns > 0 ? sigma / g.mean_ns : 0.0;
  if (g.n() < cfg.min_split_size || cv <= cfg.cv_split_threshold) return {g};

  // 1-D 2-means, centroids seeded at the extremes, iterated to fixpoint.
  double lo = exec_of(trace, g.members[0]);
  double hi = lo;
  for (auto i : g.members) {
    lo = std::min(lo, exec_of(trace, i));
    hi = std::max(hi, exec_of(trace, i));
  }
  if (lo == hi) return {g};  // degenerate: nothing to separate
  double c0 = lo, c1 = hi;
  std::vector<bool> high(g.members.size(), false);
  for (;;) {
    bool moved = false;
    for (std::size_t j = 0; j < g.members.size(); ++j) {
      const double v = exec_of(trace, g.members[j]);
      const bool h = std::abs(v - c1) < std::abs(v - c0);  // tie -> low side
      if (h != high[j]) {
        high[j] = h;
        moved = true;
      }
    }
    double s0 = 0, s1 = 0;
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t j = 0; j < g.members.size(); ++j) {
      if (high[j]) {
        s1 += exec_of(trace, g.members[j]);
        ++n1;
      } else {
        s0 += exec_of(trace, g.members[j]);
        ++n0;
      }
    }
    if (n0 == 0 || n1 == 0) return {g};  // degenerate split, keep whole
    const double nc0 = s0 / static_cast<double>(n0);
    const double nc1 = s1 / static_cast<double>(n1);
    if (!moved && nc0 == c0 && nc1 == c1) break;
    c0 = nc0;
    c1 = nc1;
    if (!moved) break;
  }

  Group a, b;
  a.name = b.name = g.name;
  a.grid = b.grid = g.grid;
  a.block = b.block = g.block;
  for (std::size_t j = 0; j < g.members.size(); ++j)
    (high[j] ? b : a).members.push_back(g.members[j]);
  fill_stats(a, trace);
  fill_stats(b, trace);
  std::vector<Group> out = split_group(a, trace, cfg);
  std::vector<Group> tail = split_group(b, trace, cfg);
  out.insert(out.end(), std::make_move_iterator(tail.begin()),
             std::make_move_iterator(tail.end()));
  return out;
}

std::uint32_t min_samples(const Group& g, const SamplerConfig& cfg) {
  cfg.validate();
  const double sigma = std::sqrt(g.var_ns2);
  if (sigma == 0.0) return 1;
  if (g.mean_ns <= 0.0)
    throw ZeroMeanPositiveVariance(
        "group '" + g.name + "' has zero mean with positive variance");
  const double root = kZ * sigma / (cfg.epsilon * g.mean_ns);
  const double m = std::ceil(root * root);
  const double n = static_cast<double>(g.n());
  return static_cast<std::uint32_t>(std::min(std::max(m, 1.0), n));
}

void sample_group(Group& g, std::uint32_t m, const gpu::Trace& trace,
                  util::Rng& rng) {
  const std::size_t n = g.members.size();
  std::vector<std::uint32_t> pool = g.members;
  // Partial Fisher-Yates: the first m slots become the sample.
  for (std::uint32_t j = 0; j < m; ++j) {
    const std::uint64_t pick = j + rng.below(n - j);
    std::swap(pool[j], pool[pick]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  g.sampled = std::move(pool);
  double sum = 0;
  for (auto i : g.sampled) sum += exec_of(trace, i);
  g.sample_mean_ns = sum / static_cast<double>(m);
  if (m >= 2 && m < n) {
    double acc = 0;
    for (auto i : g.sampled) {
      const double d = exec_of(trace, i) - g.sample_mean_ns;
      acc += d * d;
    }
    g.sample_var_ns2 = acc / static_cast<double>(m - 1);
  } else {
    g.sample_var_ns2 = 0.0;  // exhaustive or single draw
  }
}

Prediction predict_total(const std::vector<Group>& groups) {
  Prediction p;
  double var_sum = 0;
  for (const auto& g : groups) {
    const double n = static_cast<double>(g.n());
    const double m = static_cast<double>(g.sampled.size());
    p.total_ns += n * g.sample_mean_ns;
    if (m > 0) var_sum += n * n * g.sample_var_ns2 / m;
  }
  p.half_width = kZ * std::sqrt(var_sum);
  return p;
}

SampleOutcome run_sampler(const gpu::Trace& trace, const SamplerConfig& cfg) {
  cfg.validate();
  SampleOutcome out;
  out.kernels_in = trace.kernels.size();
  for (const Group& g : group_kernels(trace)) {
    auto parts = split_group(g, trace, cfg);
    out.groups.insert(out.groups.end(), std::make_move_iterator(parts.begin()),
                      std::make_move_iterator(parts.end()));
  }
  for (std::size_t i = 0; i < out.groups.size(); ++i) {
    Group& g = out.groups[i];
    g.m_min = min_samples(g, cfg);
    // Each group samples from its own stream derived from (seed, group
    // index), so results do not depend on processing order.
    util::Rng rng(splitmix(cfg.rng_seed + i));
    sample_group(g, g.m_min, trace, rng);
    out.records_out += g.sampled.size();
  }
  out.prediction = predict_total(out.groups);
  return out;
}

void emit_sampled_trace(const SampleOutcome& out, const gpu::Trace& trace,
                        std::ostream& sink) {
  for (const auto& g : out.groups) {
    nlohmann::json header = {
        {"group",
         {{"name", g.name},
          {"grid", g.grid},
          {"block", g.block},
          {"members", g.n()},
          {"sampled", g.sampled.size()}}}};
    sink << header.dump() << '\n';
    std::vector<gpu::Kernel> recs;
    recs.reserve(g.sampled.size());
    for (auto i : g.sampled) recs.push_back(trace.kernels[i]);
    gpu::write_trace(sink, recs);
  }
  if (!sink) throw IoFailure("failed writing sampled trace");
}

}  // namespace mqflash::sampler
