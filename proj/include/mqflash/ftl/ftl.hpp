#pragma once

#include <cstdint>
#include <deque>
#include <unordered_map>
#include <vector>

#include "mqflash/flash/transaction.hpp"
#include "mqflash/ftl/allocation.hpp"

namespace mqflash::ftl {

struct GcConfig {
  // Collect when a plane's erased-block fraction dips below this. 0 disables.
  double free_threshold = 0.05;
  bool enabled = true;
};

// Accounting size of one translation entry.
constexpr std::uint32_t kMapEntryBytes = 4;

// One step of an issue plan. AFTER_READS steps carry a data dependency on
// every READ step of the same plan (copy chains: read-modify-write and GC
// relocation must not program before the source data is off the array).
struct PlanStep {
  enum When : std::uint8_t { IMMEDIATE, AFTER_READS };
  flash::Transaction txn;
  When when = IMMEDIATE;
};

struct Plan {
  std::vector<PlanStep> steps;
};

struct WriteResult {
  // Any garbage-collection plans triggered by the allocation come first
  // (foreground collection), then the host write plan, so a read-modify-write
  // READ of a just-relocated page lands behind the relocation PROGRAM in its
  // plane's service order.
  std::vector<Plan> plans;
  // Transaction completions the request must still observe. Staged sectors
  // count one each; their PROGRAM may be emitted by a later write or flush.
  std::uint32_t obligations = 0;
};

struct ReadResult {
  Plan plan;  // READ transactions, all immediate
  // Content tag per requested sector (write-version numbers; 0 = never
  // written). Filled at translation time.
  std::vector<std::uint64_t> sector_versions;
  std::uint32_t zero_filled = 0;  // sectors served without touching flash
  std::uint32_t obligations = 0;  // = number of READ transactions
};

// Logical-to-physical translation at page (COARSE) or sector (FINE)
// granularity, static or dynamic plane placement ordered by scheme, and
// greedy garbage collection. Bookkeeping (mapping, validity, pools) is
// updated at plan-build time; the returned transactions carry the timing.
class Ftl {
 public:
  Ftl(const flash::Geometry& g, Mapping m, Allocation a, Scheme s,
      GcConfig gc);

  // Write `count` sectors starting at logical sector `first`. The span must
  // stay inside one logical page; the host interface splits larger requests.
  WriteResult write_sectors(std::uint64_t first, std::uint32_t count,
                            std::uint64_t req);

  // Read translation; never consumes flash space.
  ReadResult read_sectors(std::uint64_t first, std::uint32_t count,
                          std::uint64_t req);

  // PROGRAM partially staged host pages so their waiters can complete.
  // Only FINE mapping stages; returns one plan per flushed page.
  std::vector<Plan> flush_staged();

  // Run one collection pass on a plane right now (maintenance/test hook);
  // returns the resulting plans, empty when there is no candidate victim.
  std::vector<Plan> force_gc(std::uint32_t flat_plane);

  Mapping mapping() const { return mapping_; }
  Allocation allocation() const { return alloc_; }
  Scheme scheme() const { return scheme_; }

  std::uint64_t mapped_entries() const;
  std::uint64_t table_bytes() const {
    return mapped_entries() * kMapEntryBytes;
  }
  // Content tag currently mapped at a logical sector (0 = unwritten).
  std::uint64_t version_of(std::uint64_t sector) const;
  std::uint64_t gc_runs() const { return gc_runs_; }
  std::uint32_t free_blocks(std::uint32_t flat_plane) const {
    return std::uint32_t(planes_[flat_plane].pool.size());
  }

 private:
  static constexpr std::uint8_t kFree = 0, kValid = 1, kStale = 2;

  struct Loc {
    std::uint32_t plane = 0, block = 0, page = 0, slot = 0;
  };

  struct Block {
    enum class State : std::uint8_t { FREE, OPEN, CLOSED } state = State::FREE;
    std::uint32_t next_page = 0;
    std::uint32_t valid = 0;
    std::vector<std::uint8_t> sflag;    // per physical sector
    std::vector<std::uint64_t> sowner;  // logical sector held
    std::vector<std::uint64_t> sver;    // content tag
  };

  struct Stage {  // an open physical page filling up sector by sector
    bool open = false;
    Loc where;
    std::uint32_t used = 0;
    std::vector<std::uint64_t> waiters;
  };

  struct Plane {
    std::vector<Block> blocks;
    std::deque<std::uint32_t> pool;  // erased block ids, FIFO
    std::int32_t host_block = -1;    // host-write frontier
    std::int32_t gc_block = -1;      // relocation frontier
    Stage host_stage, gc_stage;
    bool gc_active = false;
  };

  Block& block_at(const Loc& l) { return planes_[l.plane].blocks[l.block]; }
  const Block& block_at(const Loc& l) const {
    return planes_[l.plane].blocks[l.block];
  }

  std::uint32_t static_plane(std::uint64_t logical_page) const {
    return order_flat_[logical_page % order_flat_.size()];
  }
  std::uint32_t next_dynamic_plane() {
    return order_flat_[dyn_cursor_++ % order_flat_.size()];
  }

  flash::Transaction make_txn(flash::TxnKind k, flash::TxnSource src,
                              const Loc& where, std::uint32_t sectors,
                              std::vector<std::uint64_t> waiters) const;

  Loc take_page(std::uint32_t plane, bool for_gc);
  std::uint32_t acquire_block(std::uint32_t plane, bool for_gc);
  void maybe_gc(std::uint32_t plane);
  void run_gc(std::uint32_t plane);

  void stage_sector(Stage& st, std::uint32_t plane, bool for_gc,
                    std::uint64_t logical, std::uint64_t version,
                    std::uint64_t waiter, Plan& plan);
  void close_stage(Stage& st, bool for_gc, Plan& plan);

  void invalidate_sector(const Loc& l);
  void invalidate_page(const Loc& l);

  flash::Geometry geo_;
  Mapping mapping_;
  Allocation alloc_;
  Scheme scheme_;
  GcConfig gc_;

  std::vector<Plane> planes_;
  std::vector<std::uint32_t> order_flat_;  // scheme order as flat indices
  std::uint64_t dyn_cursor_ = 0;
  Stage dyn_host_stage_;  // dynamic FINE: one global open host page

  std::unordered_map<std::uint64_t, Loc> page_map_;    // COARSE: lpn -> page
  std::unordered_map<std::uint64_t, Loc> sector_map_;  // FINE: lsn -> sector

  std::uint64_t version_seq_ = 0;
  std::uint64_t gc_runs_ = 0;
  std::vector<Plan> gc_outbox_;
};

// Translation-table cost of addressing `capacity_bytes` at a granularity.
std::uint64_t table_footprint_bytes(Mapping m, const flash::Geometry& g,
                                    std::uint64_t capacity_bytes);

}  // namespace mqflash::ftl
