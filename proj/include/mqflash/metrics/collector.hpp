#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "mqflash/flash/transaction.hpp"
#include "mqflash/sim/engine.hpp"

namespace mqflash::metrics {

// Geometric-bucket latency histogram. Each bin spans a 2% value ratio, so a
// reported quantile sits within 2% of the exact order statistic while memory
// stays bounded; per bin we keep (count, max observed) and report the bin max.
class LogHistogram {
 public:
  void add(std::uint64_t v);

  // Value for quantile p in (0, 1]: the recorded max of the bin holding the
  // ceil(p*n)-th smallest sample. Empty histogram reports 0.
  std::uint64_t quantile(double p) const;

  std::uint64_t max_value() const { return max_; }
  std::uint64_t count() const { return n_; }
  double mean() const { return n_ ? sum_ / double(n_) : 0.0; }

  void merge(const LogHistogram& o);

 private:
  static std::int32_t bin_of(std::uint64_t v);
  // bin -> (count, max); ordered so quantile walks are deterministic
  std::map<std::int32_t, std::pair<std::uint64_t, std::uint64_t>> bins_;
  std::uint64_t n_ = 0;
  std::uint64_t max_ = 0;
  double sum_ = 0.0;
};

struct TxnCounts {
  std::uint64_t reads = 0, programs = 0, erases = 0;
  std::uint64_t rmw_reads = 0, gc_reads = 0, gc_programs = 0, gc_erases = 0;
  std::uint64_t sectors_read = 0, sectors_programmed = 0;
  std::uint64_t host_read_sectors = 0;  // sectors served to host READs
};

// Per-run scoreboard fed by the device as transactions and requests finish.
class Collector {
 public:
  void record_txn(const flash::Transaction& t);
  void record_submitted() { ++submitted_; }
  void record_completion(sim::SimTime response_ns) {
    ++completed_;
    response_.add(response_ns);
  }
  void record_host_write_sectors(std::uint64_t n) {
    host_sectors_written_ += n;
  }
  void record_host_read_sectors(std::uint64_t n) { host_sectors_read_ += n; }
  void record_zero_fill(std::uint64_t n) { zero_filled_ += n; }

  const TxnCounts& txns() const { return txns_; }
  const LogHistogram& response() const { return response_; }
  std::uint64_t submitted() const { return submitted_; }
  std::uint64_t completed() const { return completed_; }
  std::uint64_t host_sectors_written() const { return host_sectors_written_; }
  std::uint64_t host_sectors_read() const { return host_sectors_read_; }
  std::uint64_t zero_filled() const { return zero_filled_; }

  // Flash sectors programmed per host sector written. 0 when nothing written.
  double waf() const {
    return host_sectors_written_
               ? double(txns_.sectors_programmed) / double(host_sectors_written_)
               : 0.0;
  }

 private:
  TxnCounts txns_;
  LogHistogram response_;
  std::uint64_t submitted_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t host_sectors_written_ = 0;
  std::uint64_t host_sectors_read_ = 0;
  std::uint64_t zero_filled_ = 0;
};

// Completed requests over a time span, as operations per second.
// Throws ZeroSpan when span_ns == 0.
double iops(std::uint64_t completed, sim::SimTime span_ns);

}  // namespace mqflash::metrics
