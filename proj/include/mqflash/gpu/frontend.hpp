#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "mqflash/device.hpp"
#include "mqflash/gpu/scheduler.hpp"
#include "mqflash/gpu/trace.hpp"

namespace mqflash::gpu {

// Trace-driven workload model. A fixed pool of identical core slots runs one
// kernel each for its exec_ns; a kernel's I/O requests enter the device at
// kernel start + delta_ns, on the queue pair workload_index % queue_count.
// Compute and I/O overlap: a kernel finishes at max(exec end, last I/O
// completion), and its slot then takes the next kernel from the scheduler.
// Requests bounced by a full queue pair wait in a per-pair FIFO backlog that
// is pumped on every completion.
class Frontend {
 public:
  Frontend(sim::Engine& eng, SsdDevice& dev, const Trace& trace,
           SchedConfig cfg);

  // Installs the device completion hook and fills the core slots. Drive the
  // engine (run_until_idle / drain) afterwards to play the trace out.
  void start();

  // True when every kernel has been dispatched and finished.
  bool done() const;

  std::uint64_t kernels_finished() const { return kernels_finished_; }
  std::uint64_t ios_issued() const { return ios_issued_; }
  sim::SimTime last_kernel_end() const { return last_kernel_end_; }

 private:
  struct Slot {
    bool busy = false;
    std::uint32_t kernel = 0;
    bool exec_done = false;
    std::uint64_t ios_outstanding = 0;  // I/Os not yet completed
  };
  struct Waiting {
    std::uint32_t slot;
    host::IoOp op;
    std::uint64_t offset;
    std::uint64_t length;
  };

  void dispatch();
  void begin_kernel(std::uint32_t slot, std::uint32_t kernel_idx);
  void issue_io(std::uint32_t slot, const KernelIo& io);
  void pump(std::uint32_t qp);
  void on_io_complete(const host::IoRequest& req);
  void maybe_finish(std::uint32_t slot);

  sim::Engine& eng_;
  SsdDevice& dev_;
  const Trace& trace_;
  Scheduler sched_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::vector<std::uint32_t> workload_of_;  // kernel index -> workload index
  std::vector<std::deque<Waiting>> backlog_;
  std::unordered_map<std::uint64_t, std::uint32_t> req_slot_;
  std::uint64_t kernels_finished_ = 0;
  std::uint64_t ios_issued_ = 0;
  sim::SimTime last_kernel_end_ = 0;
};

}  // namespace mqflash::gpu
