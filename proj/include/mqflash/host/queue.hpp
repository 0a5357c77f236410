#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "mqflash/flash/geometry.hpp"
#include "mqflash/host/request.hpp"

namespace mqflash::host {

// A page-scoped span of logical sectors; requests are split so no fragment
// crosses a logical page boundary.
struct Fragment {
  std::uint64_t first_sector = 0;
  std::uint32_t count = 0;
};

// Splits [offset, offset+length) into page-scoped fragments covering the
// request exactly. Throws UnalignedAccess on zero length or when offset or
// length is not a multiple of the sector size.
std::vector<Fragment> split_request(const flash::Geometry& g,
                                    std::uint64_t offset_bytes,
                                    std::uint64_t length_bytes);

// Submission/completion bookkeeping for one queue pair. The in-flight count
// covers accepted-but-not-completed requests and enforces the queue depth.
class QueuePair {
 public:
  explicit QueuePair(std::uint32_t depth) : depth_(depth) {}

  bool full() const { return in_flight_ >= depth_; }
  std::uint32_t in_flight() const { return in_flight_; }
  std::uint32_t depth() const { return depth_; }

  void accept() { ++in_flight_; }
  void release() { --in_flight_; }
  void store(IoRequest done) { done_.push_back(std::move(done)); }

  // Drains completed requests ordered by (complete_time, submission order).
  std::vector<IoRequest> poll() {
    std::sort(done_.begin(), done_.end(),
              [](const IoRequest& a, const IoRequest& b) {
                if (a.complete_time != b.complete_time)
                  return a.complete_time < b.complete_time;
                return a.submit_seq < b.submit_seq;
              });
    std::vector<IoRequest> out;
    out.swap(done_);
    return out;
  }

 private:
  std::uint32_t depth_;
  std::uint32_t in_flight_ = 0;
  std::vector<IoRequest> done_;
};

}  // namespace mqflash::host
