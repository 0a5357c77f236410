#include "mqflash/synth/generators.hpp"

#include <algorithm>
#include <cmath>

#include "mqflash/util/errors.hpp"
#include "mqflash/util/rng.hpp"

namespace mqflash::synth {

namespace {

using gpu::Kernel;
using gpu::KernelIo;
using host::IoOp;

std::uint64_t positive_normal(util::Rng& rng, double mean, double sd) {
  const double v = rng.normal(mean, sd);
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(std::llround(v));
}

// Uniform offset aligned to unit within [0, space).
std::uint64_t aligned_offset(util::Rng& rng, std::uint64_t space,
                             std::uint64_t unit) {
  const std::uint64_t slots = std::max<std::uint64_t>(space / unit, 1);
  return rng.below(slots) * unit;
}

Kernel base_kernel(const SynthParams& p, std::uint64_t id,
                   const std::string& name, std::uint64_t grid,
                   std::uint64_t block, std::uint64_t exec_ns) {
  Kernel k;
  k.workload = p.workload;
  k.kernel_id = id;
  k.name = name;
  k.grid_blocks = grid;
  k.block_threads = block;
  k.exec_ns = exec_ns;
  return k;
}

std::vector<Kernel> rand_write_4k(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    Kernel k = base_kernel(p, i, "rand_write_4k", 64, 256,
                           positive_normal(rng, 20000, 1000));
    k.ios.push_back({0, IoOp::WRITE,
                     aligned_offset(rng, p.space_bytes, p.io_bytes),
                     p.io_bytes});
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Kernel> rand_read_4k(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  // Populate prefix: cover the window with sequential writes so the random
  // reads that follow mostly land on mapped data.
  const std::uint64_t chunk = 256ull << 10;
  std::uint64_t id = 0;
  for (std::uint64_t off = 0; off < p.space_bytes; off += chunk) {
    Kernel k = base_kernel(p, id++, "populate", 1024, 256,
                           positive_normal(rng, 1000, 50));
    k.ios.push_back(
        {0, IoOp::WRITE, off, std::min(chunk, p.space_bytes - off)});
    out.push_back(std::move(k));
  }
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    Kernel k = base_kernel(p, id++, "rand_read_4k", 64, 256,
                           positive_normal(rng, 20000, 1000));
    k.ios.push_back({0, IoOp::READ,
                     aligned_offset(rng, p.space_bytes, p.io_bytes),
                     p.io_bytes});
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Kernel> sequential(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  const std::uint64_t slots = std::max<std::uint64_t>(
      p.space_bytes / p.io_bytes, 1);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    Kernel k = base_kernel(p, i, "sequential", 1024, 256,
                           positive_normal(rng, 20000, 1000));
    k.ios.push_back(
        {0, IoOp::WRITE, (i % slots) * p.io_bytes, p.io_bytes});
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Kernel> backprop_like(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  const std::uint64_t io = 64ull << 10;
  const std::uint64_t window =
      std::min<std::uint64_t>(p.space_bytes, 8ull << 20);
  const std::uint64_t slots = std::max<std::uint64_t>(window / io, 1);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    const bool forward = (i % 2) == 0;
    Kernel k = forward
                   ? base_kernel(p, i, "backprop_fw", 2048, 256,
                                 positive_normal(rng, 150000, 7500))
                   : base_kernel(p, i, "backprop_bw", 2048, 256,
                                 positive_normal(rng, 250000, 12500));
    const std::uint64_t off = ((i / 2) % slots) * io;
    k.ios.push_back({0, forward ? IoOp::READ : IoOp::WRITE, off, io});
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<Kernel> hotspot_like(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  const std::uint64_t hot =
      std::min<std::uint64_t>(p.space_bytes, 1ull << 20);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    if (i % 8 == 7) {
      Kernel k = base_kernel(p, i, "hotspot_burst", 64, 128,
                             positive_normal(rng, 80000, 4000));
      for (std::uint64_t b = 0; b < 8; ++b)
        k.ios.push_back({b * 1000, IoOp::WRITE,
                         aligned_offset(rng, hot, 4096), 4096});
      out.push_back(std::move(k));
    } else {
      out.push_back(base_kernel(p, i, "hotspot_calm", 64, 128,
                                positive_normal(rng, 50000, 2500)));
    }
  }
  return out;
}

std::vector<Kernel> lavamd_like(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    if (rng.below(2) == 0) {
      Kernel k = base_kernel(p, i, "lavamd_small", 128, 128,
                             positive_normal(rng, 120000, 6000));
      k.ios.push_back({0,
                       rng.below(2) == 0 ? IoOp::READ : IoOp::WRITE,
                       aligned_offset(rng, p.space_bytes, 4096), 4096});
      out.push_back(std::move(k));
    } else {
      Kernel k = base_kernel(p, i, "lavamd_box", 128, 128,
                             positive_normal(rng, 300000, 15000));
      const std::uint64_t off = aligned_offset(rng, p.space_bytes, 16384);
      k.ios.push_back({0, IoOp::READ, off, 16384});
      k.ios.push_back({5000, IoOp::WRITE, off, 16384});
      out.push_back(std::move(k));
    }
  }
  return out;
}

std::vector<Kernel> bimodal_exec(const SynthParams& p) {
  util::Rng rng(p.seed);
  std::vector<Kernel> out;
  out.reserve(p.kernels);
  for (std::uint64_t i = 0; i < p.kernels; ++i) {
    const std::uint64_t exec = (i % 2) == 0
                                   ? positive_normal(rng, 1000, 30)
                                   : positive_normal(rng, 100000, 3000);
    Kernel k = base_kernel(p, i, "bimodal", 64, 128, exec);
    k.ios.push_back({0, IoOp::WRITE,
                     aligned_offset(rng, p.space_bytes, 4096), 4096});
    out.push_back(std::move(k));
  }
  return out;
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"rand_write_4k", "rand_read_4k",  "sequential", "backprop_like",
          "hotspot_like",  "lavamd_like",   "bimodal_exec"};
}

std::vector<gpu::Kernel> make_trace(const std::string& kind,
                                    const SynthParams& p) {
  if (kind == "rand_write_4k") return rand_write_4k(p);
  if (kind == "rand_read_4k") return rand_read_4k(p);
  if (kind == "sequential") return sequential(p);
  if (kind == "backprop_like") return backprop_like(p);
  if (kind == "hotspot_like") return hotspot_like(p);
  if (kind == "lavamd_like") return lavamd_like(p);
  if (kind == "bimodal_exec") return bimodal_exec(p);
  std::string known;
  for (const auto& n : generator_names())
    known += (known.empty() ? "" : ", ") + n;
  throw UnknownGenerator("unknown generator '" + kind + "' (want one of " +
                         known + ")");
}

}  // namespace mqflash::synth
