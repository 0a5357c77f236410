#include "mqflash/device.hpp"

#include <cassert>
#include <memory>
#include <string>
#include <utility>

#include "mqflash/util/errors.hpp"

namespace mqflash {

SsdDevice::SsdDevice(sim::Engine& eng, const DeviceConfig& cfg)
    : eng_(eng),
      cfg_(cfg),
      backend_(eng, cfg.geometry, cfg.timing),
      ftl_(cfg.geometry, cfg.mapping, cfg.allocation, cfg.scheme, cfg.gc) {
  if (cfg.queue_count == 0)
    throw ConfigError("queue_count must be >= 1 once resolved");
  if (cfg.queue_depth == 0) throw ConfigError("queue_depth must be >= 1");
  qps_.assign(cfg.queue_count, host::QueuePair(cfg.queue_depth));
}

std::optional<std::uint64_t> SsdDevice::enqueue(std::uint32_t qp,
                                                host::IoOp op,
                                                std::uint64_t offset_bytes,
                                                std::uint64_t length_bytes) {
  if (qp >= qps_.size())
    throw ConfigError("queue id " + std::to_string(qp) + " out of range");
  // Validate before consuming a slot: malformed requests never enter a queue.
  auto fragments =
      host::split_request(cfg_.geometry, offset_bytes, length_bytes);
  if (qps_[qp].full()) return std::nullopt;

  const std::uint64_t id = ++next_id_;
  Inflight fl;
  fl.req.id = id;
  fl.req.queue_id = qp;
  fl.req.op = op;
  fl.req.offset_bytes = offset_bytes;
  fl.req.length_bytes = length_bytes;
  fl.req.submit_time = eng_.now();
  fl.req.submit_seq = next_seq_++;
  qps_[qp].accept();
  metrics_.record_submitted();

  const std::uint64_t sectors = length_bytes / cfg_.geometry.sector_bytes;
  if (op == host::IoOp::WRITE) {
    metrics_.record_host_write_sectors(sectors);
    for (const auto& f : fragments) {
      auto w = ftl_.write_sectors(f.first_sector, f.count, id);
      fl.remaining += w.obligations;
      for (auto& p : w.plans) execute_plan(std::move(p));
    }
  } else {
    metrics_.record_host_read_sectors(sectors);
    for (const auto& f : fragments) {
      auto r = ftl_.read_sectors(f.first_sector, f.count, id);
      fl.remaining += r.obligations;
      metrics_.record_zero_fill(r.zero_filled);
      fl.req.data_versions.insert(fl.req.data_versions.end(),
                                  r.sector_versions.begin(),
                                  r.sector_versions.end());
      execute_plan(std::move(r.plan));
    }
  }

  const bool instant = fl.remaining == 0;  // fully zero-filled read
  inflight_.emplace(id, std::move(fl));
  if (instant)
    eng_.schedule(eng_.now(), [this, id] { finish_request(id); });
  return id;
}

void SsdDevice::execute_plan(ftl::Plan plan) {
  auto deferred = std::make_shared<std::vector<flash::Transaction>>();
  auto pending_reads = std::make_shared<std::uint32_t>(0);
  for (const auto& s : plan.steps)
    if (s.when == ftl::PlanStep::IMMEDIATE &&
        s.txn.kind == flash::TxnKind::READ)
      ++*pending_reads;

  auto plain = [this](const flash::Transaction& t) { on_txn_done(t); };

  for (auto& s : plan.steps) {
    if (s.when == ftl::PlanStep::AFTER_READS) {
      deferred->push_back(std::move(s.txn));
      continue;
    }
    if (s.txn.kind == flash::TxnKind::READ) {
      backend_.submit(
          std::move(s.txn),
          [this, pending_reads, deferred, plain](const flash::Transaction& t) {
            on_txn_done(t);
            if (--*pending_reads == 0)
              for (auto& d : *deferred) backend_.submit(std::move(d), plain);
          });
    } else {
      backend_.submit(std::move(s.txn), plain);
    }
  }
  if (*pending_reads == 0)
    for (auto& d : *deferred) backend_.submit(std::move(d), plain);
}

void SsdDevice::on_txn_done(const flash::Transaction& t) {
  metrics_.record_txn(t);
  for (const std::uint64_t id : t.waiters) {
    auto it = inflight_.find(id);
    assert(it != inflight_.end());
    if (--it->second.remaining == 0) finish_request(id);
  }
}

void SsdDevice::finish_request(std::uint64_t id) {
  auto it = inflight_.find(id);
  assert(it != inflight_.end());
  host::IoRequest req = std::move(it->second.req);
  inflight_.erase(it);
  req.complete_time = eng_.now();
  metrics_.record_completion(req.complete_time - req.submit_time);
  host::QueuePair& pair = qps_[req.queue_id];
  pair.release();  // slot frees before the hook so retries can fill it
  if (hook_)
    hook_(req);
  else
    pair.store(std::move(req));
}

std::vector<host::IoRequest> SsdDevice::poll_completions(std::uint32_t qp) {
  if (qp >= qps_.size())
    throw ConfigError("queue id " + std::to_string(qp) + " out of range");
  return qps_[qp].poll();
}

bool SsdDevice::flush_staged() {
  auto plans = ftl_.flush_staged();
  if (plans.empty()) return false;
  for (auto& p : plans) execute_plan(std::move(p));
  return true;
}

sim::SimTime SsdDevice::drain() {
  while (true) {
    eng_.run_until_idle();
    if (!flush_staged()) return eng_.now();
  }
}

}  // namespace mqflash
