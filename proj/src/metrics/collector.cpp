#include "mqflash/metrics/collector.hpp"

#include <cmath>

#include "mqflash/util/errors.hpp"

namespace mqflash::metrics {

std::int32_t LogHistogram::bin_of(std::uint64_t v) {
  if (v <= 1) return 0;
  static const double kInvLog = 1.0 / std::log(1.02);
  return std::int32_t(std::floor(std::log(double(v)) * kInvLog));
}

void LogHistogram::add(std::uint64_t v) {
  auto& [count, mx] = bins_[bin_of(v)];
  ++count;
  if (v > mx) mx = v;
  ++n_;
  if (v > max_) max_ = v;
  sum_ += double(v);
}

std::uint64_t LogHistogram::quantile(double p) const {
  if (n_ == 0) return 0;
  std::uint64_t k = std::uint64_t(std::ceil(p * double(n_)));
  if (k < 1) k = 1;
  if (k > n_) k = n_;
  std::uint64_t seen = 0;
  for (const auto& [bin, cm] : bins_) {
    seen += cm.first;
    if (seen >= k) return cm.second;
  }
  return max_;
}

void LogHistogram::merge(const LogHistogram& o) {
  for (const auto& [bin, cm] : o.bins_) {
    auto& [count, mx] = bins_[bin];
    count += cm.first;
    if (cm.second > mx) mx = cm.second;
  }
  n_ += o.n_;
  if (o.max_ > max_) max_ = o.max_;
  sum_ += o.sum_;
}

void Collector::record_txn(const flash::Transaction& t) {
  switch (t.kind) {
    case flash::TxnKind::READ:
      ++txns_.reads;
      txns_.sectors_read += t.sectors;
      if (t.source == flash::TxnSource::HOST_READ)
        txns_.host_read_sectors += t.sectors;
      if (t.source == flash::TxnSource::RMW_READ) ++txns_.rmw_reads;
      if (t.source == flash::TxnSource::GC_READ) ++txns_.gc_reads;
      break;
    case flash::TxnKind::PROGRAM:
      ++txns_.programs;
      txns_.sectors_programmed += t.sectors;
      if (t.source == flash::TxnSource::GC_PROGRAM) ++txns_.gc_programs;
      break;
    case flash::TxnKind::ERASE:
      ++txns_.erases;
      if (t.source == flash::TxnSource::GC_ERASE) ++txns_.gc_erases;
      break;
  }
}

double iops(std::uint64_t completed, sim::SimTime span_ns) {
  if (span_ns == 0) throw ZeroSpan("rate over an empty time span");
  return double(completed) * 1e9 / double(span_ns);
}

}  // namespace mqflash::metrics
