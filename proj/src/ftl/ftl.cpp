#include "mqflash/ftl/ftl.hpp"

#include <algorithm>
#include <cassert>
#include <string>
#include <utility>

#include "mqflash/util/errors.hpp"

namespace mqflash::ftl {

Ftl::Ftl(const flash::Geometry& g, Mapping m, Allocation a, Scheme s,
         GcConfig gc)
    : geo_(g), mapping_(m), alloc_(a), scheme_(s), gc_(gc) {
  geo_.validate();
  if (gc_.free_threshold < 0.0 || gc_.free_threshold >= 1.0)
    throw ConfigError("gc_free_threshold must lie in [0, 1); 0 disables");
  const auto order = plane_order(scheme_, geo_);
  order_flat_.reserve(order.size());
  for (const auto& pa : order)
    order_flat_.push_back(flash::flat_plane(geo_, pa));

  const std::uint32_t spb = geo_.pages_per_block * geo_.sectors_per_page();
  planes_.resize(geo_.total_planes());
  for (auto& P : planes_) {
    P.blocks.resize(geo_.blocks_per_plane);
    for (std::uint32_t b = 0; b < geo_.blocks_per_plane; ++b) {
      P.blocks[b].sflag.assign(spb, kFree);
      P.blocks[b].sowner.assign(spb, 0);
      P.blocks[b].sver.assign(spb, 0);
      P.pool.push_back(b);
    }
  }
}

flash::Transaction Ftl::make_txn(flash::TxnKind k, flash::TxnSource src,
                                 const Loc& where, std::uint32_t sectors,
                                 std::vector<std::uint64_t> waiters) const {
  flash::Transaction t;
  t.kind = k;
  t.source = src;
  t.plane = flash::unflatten_plane(geo_, where.plane);
  t.block = where.block;
  t.page = where.page;
  t.sectors = sectors;
  t.waiters = std::move(waiters);
  return t;
}

Ftl::Loc Ftl::take_page(std::uint32_t plane, bool for_gc) {
  Plane& P = planes_[plane];
  std::int32_t& active = for_gc ? P.gc_block : P.host_block;
  if (active >= 0 &&
      P.blocks[std::size_t(active)].next_page == geo_.pages_per_block) {
    P.blocks[std::size_t(active)].state = Block::State::CLOSED;
    active = -1;
  }
  if (active < 0) active = std::int32_t(acquire_block(plane, for_gc));
  Block& b = P.blocks[std::size_t(active)];
  return {plane, std::uint32_t(active), b.next_page++, 0};
}

std::uint32_t Ftl::acquire_block(std::uint32_t plane, bool for_gc) {
  Plane& P = planes_[plane];
  // Last-ditch synchronous reclaim before declaring the plane full.
  if (P.pool.empty() && !for_gc) run_gc(plane);
  if (P.pool.empty())
    throw OutOfSpace("plane " + std::to_string(plane) +
                     " has no erased blocks" +
                     (for_gc ? " left for relocation" : " after collection"));
  const std::uint32_t id = P.pool.front();
  P.pool.pop_front();
  P.blocks[id].state = Block::State::OPEN;
  if (!for_gc) maybe_gc(plane);
  return id;
}

void Ftl::maybe_gc(std::uint32_t plane) {
  Plane& P = planes_[plane];
  if (!gc_.enabled || gc_.free_threshold <= 0.0 || P.gc_active) return;
  // Collect until the erased fraction is back above the watermark. A single
  // pass is not enough under sustained churn: one run frees its victim but
  // spends relocation pages, netting less than a block when victims are
  // mostly valid, and the pool would walk down to empty.
  while (double(P.pool.size()) / double(geo_.blocks_per_plane) <
         gc_.free_threshold) {
    const std::uint64_t before = gc_runs_;
    run_gc(plane);
    if (gc_runs_ == before) break;  // nothing reclaimable right now
  }
}

void Ftl::run_gc(std::uint32_t plane) {
  Plane& P = planes_[plane];
  if (!gc_.enabled || P.gc_active) return;
  P.gc_active = true;

  // Greedy victim: fewest valid sectors among closed blocks, ties lowest id.
  const std::uint32_t spp = geo_.sectors_per_page();
  const std::uint32_t cap = geo_.pages_per_block * spp;
  std::int32_t victim = -1;
  std::uint32_t best = UINT32_MAX;
  for (std::uint32_t b = 0; b < P.blocks.size(); ++b) {
    const Block& blk = P.blocks[b];
    if (blk.state != Block::State::CLOSED) continue;
    if (blk.valid < best) {
      best = blk.valid;
      victim = std::int32_t(b);
    }
  }
  // A fully valid victim reclaims nothing; treat it as no candidate.
  if (victim < 0 || best == cap) {
    P.gc_active = false;
    return;
  }
  ++gc_runs_;

  Block& vb = P.blocks[std::size_t(victim)];
  Plan plan;

  // Reads of surviving data, grouped per page.
  for (std::uint32_t pg = 0; pg < geo_.pages_per_block; ++pg) {
    std::uint32_t nvalid = 0;
    for (std::uint32_t s = 0; s < spp; ++s)
      if (vb.sflag[pg * spp + s] == kValid) ++nvalid;
    if (nvalid)
      plan.steps.push_back(
          {make_txn(flash::TxnKind::READ, flash::TxnSource::GC_READ,
                    {plane, std::uint32_t(victim), pg, 0}, nvalid, {}),
           PlanStep::IMMEDIATE});
  }

  // Relocation stays on the same plane, through the collection frontier.
  if (mapping_ == Mapping::COARSE) {
    for (std::uint32_t pg = 0; pg < geo_.pages_per_block; ++pg) {
      const std::uint32_t base = pg * spp;
      if (vb.sflag[base] != kValid) continue;  // pages live or die whole
      const Loc np = take_page(plane, true);
      Block& nb = block_at(np);
      for (std::uint32_t s = 0; s < spp; ++s) {
        const std::uint32_t to = np.page * spp + s;
        nb.sflag[to] = kValid;
        nb.sowner[to] = vb.sowner[base + s];
        nb.sver[to] = vb.sver[base + s];
        ++nb.valid;
      }
      page_map_[vb.sowner[base] / spp] = np;
      plan.steps.push_back(
          {make_txn(flash::TxnKind::PROGRAM, flash::TxnSource::GC_PROGRAM, np,
                    spp, {}),
           PlanStep::AFTER_READS});
    }
  } else {
    // The relocation page persists across victims: flushing a partial page
    // per victim would strand its tail slots, and a mostly-valid victim
    // would then reclaim nothing, so collection could stop making progress.
    // The open page lives in an OPEN block, which the victim scan skips.
    Stage& st = P.gc_stage;
    for (std::uint32_t pg = 0; pg < geo_.pages_per_block; ++pg) {
      for (std::uint32_t s = 0; s < spp; ++s) {
        const std::uint32_t idx = pg * spp + s;
        if (vb.sflag[idx] != kValid) continue;
        if (!st.open) {
          const Loc pp = take_page(plane, true);
          st.open = true;
          st.where = pp;
          st.used = 0;
          st.waiters.clear();
        }
        stage_sector(st, plane, true, vb.sowner[idx], vb.sver[idx], 0, plan);
      }
    }
  }

  plan.steps.push_back(
      {make_txn(flash::TxnKind::ERASE, flash::TxnSource::GC_ERASE,
                {plane, std::uint32_t(victim), 0, 0}, 0, {}),
       PlanStep::AFTER_READS});

  // Bookkeeping is immediate; the erase transaction carries the timing.
  std::fill(vb.sflag.begin(), vb.sflag.end(), kFree);
  vb.valid = 0;
  vb.next_page = 0;
  vb.state = Block::State::FREE;
  P.pool.push_back(std::uint32_t(victim));

  gc_outbox_.push_back(std::move(plan));
  P.gc_active = false;
}

void Ftl::stage_sector(Stage& st, std::uint32_t plane, bool for_gc,
                       std::uint64_t logical, std::uint64_t version,
                       std::uint64_t waiter, Plan& plan) {
  (void)plane;
  Block& b = block_at(st.where);
  const std::uint32_t spp = geo_.sectors_per_page();
  const std::uint32_t slot = st.used++;
  const std::uint32_t idx = st.where.page * spp + slot;
  b.sflag[idx] = kValid;
  b.sowner[idx] = logical;
  b.sver[idx] = version;
  ++b.valid;
  Loc at = st.where;
  at.slot = slot;
  sector_map_[logical] = at;
  if (!for_gc) st.waiters.push_back(waiter);
  if (st.used == spp) close_stage(st, for_gc, plan);
}

void Ftl::close_stage(Stage& st, bool for_gc, Plan& plan) {
  plan.steps.push_back(
      {make_txn(flash::TxnKind::PROGRAM,
                for_gc ? flash::TxnSource::GC_PROGRAM
                       : flash::TxnSource::HOST_PROGRAM,
                st.where, st.used, std::move(st.waiters)),
       for_gc ? PlanStep::AFTER_READS : PlanStep::IMMEDIATE});
  st = Stage{};
}

void Ftl::invalidate_sector(const Loc& l) {
  Block& b = block_at(l);
  const std::uint32_t idx = l.page * geo_.sectors_per_page() + l.slot;
  assert(b.sflag[idx] == kValid);
  b.sflag[idx] = kStale;
  --b.valid;
}

void Ftl::invalidate_page(const Loc& l) {
  Block& b = block_at(l);
  const std::uint32_t spp = geo_.sectors_per_page();
  for (std::uint32_t s = 0; s < spp; ++s) {
    const std::uint32_t idx = l.page * spp + s;
    if (b.sflag[idx] == kValid) {
      b.sflag[idx] = kStale;
      --b.valid;
    }
  }
}

WriteResult Ftl::write_sectors(std::uint64_t first, std::uint32_t count,
                               std::uint64_t req) {
  WriteResult out;
  const std::uint32_t spp = geo_.sectors_per_page();
  const std::uint64_t lp = first / spp;
  const std::uint32_t s0 = std::uint32_t(first % spp);
  if (count == 0 || s0 + count > spp)
    throw UnalignedAccess("write of " + std::to_string(count) +
                          " sectors at logical sector " +
                          std::to_string(first) + " crosses a page boundary");

  if (mapping_ == Mapping::COARSE) {
    const auto old_it = page_map_.find(lp);
    const bool had_old = old_it != page_map_.end();
    // Snapshot carried content before allocation: collection triggered by
    // take_page may relocate the old page under us.
    std::vector<std::uint64_t> carry(spp, 0);
    if (had_old) {
      const Block& ob = block_at(old_it->second);
      for (std::uint32_t s = 0; s < spp; ++s)
        carry[s] = ob.sver[old_it->second.page * spp + s];
    }
    const std::uint32_t pl =
        alloc_ == Allocation::DYNAMIC ? next_dynamic_plane() : static_plane(lp);
    const Loc np = take_page(pl, false);
    Loc old_loc{};
    if (had_old) {
      old_loc = page_map_.at(lp);  // re-find: GC may have moved the page
      invalidate_page(old_loc);
    }
    Block& nb = block_at(np);
    const std::uint64_t base = lp * spp;
    for (std::uint32_t s = 0; s < spp; ++s) {
      const std::uint32_t idx = np.page * spp + s;
      const bool fresh = s >= s0 && s < s0 + count;
      nb.sflag[idx] = kValid;
      nb.sowner[idx] = base + s;
      nb.sver[idx] = fresh ? ++version_seq_ : carry[s];
      ++nb.valid;
    }
    page_map_[lp] = np;

    Plan p;
    if (had_old && count < spp) {
      // Read-modify-write: the unwritten remainder must come off the old
      // page before the merged page can program.
      p.steps.push_back({make_txn(flash::TxnKind::READ,
                                  flash::TxnSource::RMW_READ, old_loc, spp,
                                  {}),
                         PlanStep::IMMEDIATE});
      p.steps.push_back({make_txn(flash::TxnKind::PROGRAM,
                                  flash::TxnSource::HOST_PROGRAM, np, spp,
                                  {req}),
                         PlanStep::AFTER_READS});
    } else {
      p.steps.push_back({make_txn(flash::TxnKind::PROGRAM,
                                  flash::TxnSource::HOST_PROGRAM, np, spp,
                                  {req}),
                         PlanStep::IMMEDIATE});
    }
    out.obligations = 1;
    // Collection plans first: the allocation that triggered them stalls
    // behind the reclaim on the same plane.
    out.plans = std::move(gc_outbox_);
    gc_outbox_.clear();
    out.plans.push_back(std::move(p));
  } else {
    Plan host_plan;
    for (std::uint32_t i = 0; i < count; ++i) {
      const std::uint64_t ls = first + i;
      const auto it = sector_map_.find(ls);
      if (it != sector_map_.end()) invalidate_sector(it->second);
      Stage& st = alloc_ == Allocation::DYNAMIC
                      ? dyn_host_stage_
                      : planes_[static_plane(ls / spp)].host_stage;
      if (!st.open) {
        const std::uint32_t pl = alloc_ == Allocation::DYNAMIC
                                     ? next_dynamic_plane()
                                     : static_plane(ls / spp);
        const Loc pp = take_page(pl, false);
        st.open = true;
        st.where = pp;
        st.used = 0;
        st.waiters.clear();
      }
      stage_sector(st, st.where.plane, false, ls, ++version_seq_, req,
                   host_plan);
    }
    out.obligations = count;
    out.plans = std::move(gc_outbox_);
    gc_outbox_.clear();
    if (!host_plan.steps.empty()) out.plans.push_back(std::move(host_plan));
  }
  return out;
}

ReadResult Ftl::read_sectors(std::uint64_t first, std::uint32_t count,
                             std::uint64_t req) {
  ReadResult out;
  const std::uint32_t spp = geo_.sectors_per_page();
  if (count == 0 || first % spp + count > spp)
    throw UnalignedAccess("read of " + std::to_string(count) +
                          " sectors at logical sector " +
                          std::to_string(first) + " crosses a page boundary");
  out.sector_versions.assign(count, 0);

  if (mapping_ == Mapping::FINE) {
    // Group hits per physical page, first-touch order.
    std::vector<std::pair<Loc, std::uint32_t>> pieces;
    for (std::uint32_t i = 0; i < count; ++i) {
      const auto it = sector_map_.find(first + i);
      if (it == sector_map_.end()) {
        ++out.zero_filled;
        continue;
      }
      const Loc& at = it->second;
      out.sector_versions[i] =
          block_at(at).sver[at.page * spp + at.slot];
      bool merged = false;
      for (auto& [where, n] : pieces) {
        if (where.plane == at.plane && where.block == at.block &&
            where.page == at.page) {
          ++n;
          merged = true;
          break;
        }
      }
      if (!merged) pieces.emplace_back(at, 1);
    }
    for (auto& [where, n] : pieces)
      out.plan.steps.push_back(
          {make_txn(flash::TxnKind::READ, flash::TxnSource::HOST_READ, where,
                    n, {req}),
           PlanStep::IMMEDIATE});
  } else {
    const std::uint64_t lp = first / spp;
    const auto it = page_map_.find(lp);
    if (it == page_map_.end()) {
      out.zero_filled = count;
    } else {
      const Loc& at = it->second;
      const Block& b = block_at(at);
      const std::uint32_t s0 = std::uint32_t(first % spp);
      for (std::uint32_t i = 0; i < count; ++i)
        out.sector_versions[i] = b.sver[at.page * spp + s0 + i];
      out.plan.steps.push_back(
          {make_txn(flash::TxnKind::READ, flash::TxnSource::HOST_READ, at,
                    count, {req}),
           PlanStep::IMMEDIATE});
    }
  }
  out.obligations = std::uint32_t(out.plan.steps.size());
  return out;
}

std::vector<Plan> Ftl::flush_staged() {
  std::vector<Plan> out;
  if (mapping_ != Mapping::FINE) return out;
  auto flush_one = [&](Stage& st) {
    if (st.open && st.used > 0) {
      Plan p;
      close_stage(st, false, p);
      out.push_back(std::move(p));
    }
  };
  if (alloc_ == Allocation::DYNAMIC) {
    flush_one(dyn_host_stage_);
  } else {
    for (auto& P : planes_) flush_one(P.host_stage);
  }
  return out;
}

std::vector<Plan> Ftl::force_gc(std::uint32_t flat_plane) {
  run_gc(flat_plane);
  std::vector<Plan> out = std::move(gc_outbox_);
  gc_outbox_.clear();
  return out;
}

std::uint64_t Ftl::mapped_entries() const {
  return mapping_ == Mapping::FINE ? sector_map_.size() : page_map_.size();
}

std::uint64_t Ftl::version_of(std::uint64_t sector) const {
  const std::uint32_t spp = geo_.sectors_per_page();
  if (mapping_ == Mapping::FINE) {
    const auto it = sector_map_.find(sector);
    if (it == sector_map_.end()) return 0;
    const Loc& at = it->second;
    return block_at(at).sver[at.page * spp + at.slot];
  }
  const auto it = page_map_.find(sector / spp);
  if (it == page_map_.end()) return 0;
  const Loc& at = it->second;
  return block_at(at).sver[at.page * spp + std::uint32_t(sector % spp)];
}

std::uint64_t table_footprint_bytes(Mapping m, const flash::Geometry& g,
                                    std::uint64_t capacity_bytes) {
  const std::uint64_t unit =
      m == Mapping::FINE ? g.sector_bytes : g.page_bytes;
  return capacity_bytes / unit * kMapEntryBytes;
}

}  // namespace mqflash::ftl
