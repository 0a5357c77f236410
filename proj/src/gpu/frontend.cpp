#include "mqflash/gpu/frontend.hpp"

namespace mqflash::gpu {

Frontend::Frontend(sim::Engine& eng, SsdDevice& dev, const Trace& trace,
                   SchedConfig cfg)
    : eng_(eng), dev_(dev), trace_(trace), sched_(trace, cfg) {
  cfg.validate();
  slots_.resize(cfg.core_count);
  free_slots_.reserve(cfg.core_count);
  for (std::uint32_t s = 0; s < cfg.core_count; ++s)
    free_slots_.push_back(cfg.core_count - 1 - s);  // pop() hands out slot 0 first
  workload_of_.resize(trace_.kernels.size(), 0);
  for (std::uint32_t w = 0; w < trace_.by_workload.size(); ++w)
    for (std::uint32_t k : trace_.by_workload[w]) workload_of_[k] = w;
  backlog_.resize(dev_.queue_count());
}

void Frontend::start() {
  dev_.set_completion_hook(
      [this](const host::IoRequest& r) { on_io_complete(r); });
  dispatch();
}

bool Frontend::done() const {
  return sched_.remaining() == 0 &&
         free_slots_.size() == slots_.size();
}

void Frontend::dispatch() {
  while (!free_slots_.empty()) {
    auto next = sched_.next();
    if (!next) return;
    std::uint32_t slot = free_slots_.back();
    free_slots_.pop_back();
    begin_kernel(slot, *next);
  }
}

void Frontend::begin_kernel(std::uint32_t slot, std::uint32_t kernel_idx) {
  const Kernel& k = trace_.kernels[kernel_idx];
  Slot& s = slots_[slot];
  s.busy = true;
  s.kernel = kernel_idx;
  s.exec_done = false;
  s.ios_outstanding = k.ios.size();
  const sim::SimTime start = eng_.now();
  eng_.schedule(start + k.exec_ns, [this, slot] {
    slots_[slot].exec_done = true;
    maybe_finish(slot);
  });
  for (const KernelIo& io : k.ios) {
    eng_.schedule(start + io.delta_ns,
                  [this, slot, &io] { issue_io(slot, io); });
  }
}

void Frontend::issue_io(std::uint32_t slot, const KernelIo& io) {
  const std::uint32_t qp =
      workload_of_[slots_[slot].kernel] % dev_.queue_count();
  backlog_[qp].push_back({slot, io.op, io.offset_bytes, io.length_bytes});
  pump(qp);
}

void Frontend::pump(std::uint32_t qp) {
  auto& q = backlog_[qp];
  while (!q.empty()) {
    const Waiting& w = q.front();
    auto id = dev_.enqueue(qp, w.op, w.offset, w.length);
    if (!id) return;  // pair full; retried on the next completion
    req_slot_.emplace(*id, w.slot);
    ++ios_issued_;
    q.pop_front();
  }
}

void Frontend::on_io_complete(const host::IoRequest& req) {
  auto it = req_slot_.find(req.id);
  if (it == req_slot_.end()) return;  // not ours (direct enqueue by a test)
  const std::uint32_t slot = it->second;
  req_slot_.erase(it);
  --slots_[slot].ios_outstanding;
  pump(req.queue_id);
  maybe_finish(slot);
}

void Frontend::maybe_finish(std::uint32_t slot) {
  Slot& s = slots_[slot];
  if (!s.busy || !s.exec_done || s.ios_outstanding != 0) return;
  s.busy = false;
  ++kernels_finished_;
  if (eng_.now() > last_kernel_end_) last_kernel_end_ = eng_.now();
  free_slots_.push_back(slot);
  dispatch();
}

}  // namespace mqflash::gpu
