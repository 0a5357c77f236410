#include "mqflash/flash/backend.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "mqflash/util/errors.hpp"

namespace mqflash::flash {

const char* to_string(TxnKind k) {
  switch (k) {
    case TxnKind::READ: return "READ";
    case TxnKind::PROGRAM: return "PROGRAM";
    case TxnKind::ERASE: return "ERASE";
  }
  return "?";
}

const char* to_string(TxnSource s) {
  switch (s) {
    case TxnSource::HOST_READ: return "host_read";
    case TxnSource::HOST_PROGRAM: return "host_program";
    case TxnSource::RMW_READ: return "rmw_read";
    case TxnSource::GC_READ: return "gc_read";
    case TxnSource::GC_PROGRAM: return "gc_program";
    case TxnSource::GC_ERASE: return "gc_erase";
  }
  return "?";
}

Backend::Backend(sim::Engine& eng, const Geometry& g, const Timing& t)
    : eng_(eng), geo_(g), tim_(t) {
  geo_.validate();
  tim_.validate();
  bus_free_.assign(geo_.channels, 0);
  array_free_.assign(geo_.total_planes(), 0);
  plane_busy_.assign(geo_.total_planes(), 0);
}

SimTime Backend::submit(Transaction txn, Completion on_done) {
  const PlaneAddr& a = txn.plane;
  if (a.channel >= geo_.channels || a.way >= geo_.ways_per_channel ||
      a.die >= geo_.dies_per_way || a.plane >= geo_.planes_per_die ||
      txn.block >= geo_.blocks_per_plane ||
      (txn.kind != TxnKind::ERASE && txn.page >= geo_.pages_per_block))
    throw OutOfGeometry("transaction target c" + std::to_string(a.channel) +
                        ".w" + std::to_string(a.way) + ".d" +
                        std::to_string(a.die) + ".p" + std::to_string(a.plane) +
                        " blk" + std::to_string(txn.block) + " pg" +
                        std::to_string(txn.page) + " outside device");
  if (txn.kind != TxnKind::ERASE &&
      (txn.sectors == 0 || txn.sectors > geo_.sectors_per_page()))
    throw std::invalid_argument("transaction payload of " +
                                std::to_string(txn.sectors) +
                                " sectors outside [1, sectors_per_page]");

  const SimTime now = eng_.now();
  const std::uint32_t ch = a.channel;
  const std::uint32_t pl = flat_plane(geo_, a);
  txn.issued_ns = now;

  switch (txn.kind) {
    case TxnKind::PROGRAM: {
      const SimTime xfer = transfer_ns(geo_, tim_, txn.sectors);
      txn.bus_start_ns = std::max(now, bus_free_[ch]);
      txn.bus_end_ns = txn.bus_start_ns + xfer;
      bus_free_[ch] = txn.bus_end_ns;
      txn.array_start_ns = std::max(txn.bus_end_ns, array_free_[pl]);
      txn.array_end_ns = txn.array_start_ns + tim_.program_ns;
      array_free_[pl] = txn.array_end_ns;
      txn.done_ns = txn.array_end_ns;
      break;
    }
    case TxnKind::READ: {
      const SimTime xfer = transfer_ns(geo_, tim_, txn.sectors);
      txn.array_start_ns = std::max(now, array_free_[pl]);
      txn.array_end_ns = txn.array_start_ns + tim_.read_ns;
      array_free_[pl] = txn.array_end_ns;
      txn.bus_start_ns = std::max(txn.array_end_ns, bus_free_[ch]);
      txn.bus_end_ns = txn.bus_start_ns + xfer;
      bus_free_[ch] = txn.bus_end_ns;
      txn.done_ns = txn.bus_end_ns;
      break;
    }
    case TxnKind::ERASE: {
      txn.array_start_ns = std::max(now, array_free_[pl]);
      txn.array_end_ns = txn.array_start_ns + tim_.erase_ns;
      array_free_[pl] = txn.array_end_ns;
      txn.bus_start_ns = txn.bus_end_ns = txn.array_start_ns;
      txn.done_ns = txn.array_end_ns;
      break;
    }
  }

  plane_busy_[pl] += txn.array_end_ns - txn.array_start_ns;

  const SimTime done = txn.done_ns;
  eng_.schedule(done, [t = std::move(txn), cb = std::move(on_done)]() mutable {
    if (cb) cb(t);
  });
  return done;
}

}  // namespace mqflash::flash
