#pragma once

#include <cstdint>
#include <vector>

#include "mqflash/flash/geometry.hpp"

namespace mqflash::flash {

enum class TxnKind : std::uint8_t { READ, PROGRAM, ERASE };

// Who caused the transaction; drives the accounting split between host
// traffic, read-modify-write synthesis, and garbage collection.
enum class TxnSource : std::uint8_t {
  HOST_READ,
  HOST_PROGRAM,
  RMW_READ,
  GC_READ,
  GC_PROGRAM,
  GC_ERASE,
};

struct Transaction {
  TxnKind kind = TxnKind::READ;
  TxnSource source = TxnSource::HOST_READ;
  PlaneAddr plane;
  std::uint32_t block = 0;
  std::uint32_t page = 0;     // ignored for ERASE
  std::uint32_t sectors = 0;  // payload sectors moved on the bus (READ/PROGRAM)
  std::vector<std::uint64_t> waiters;  // host requests this txn completes

  // timeline, filled by the backend
  SimTime issued_ns = 0;
  SimTime bus_start_ns = 0, bus_end_ns = 0;      // zero-width for ERASE
  SimTime array_start_ns = 0, array_end_ns = 0;
  SimTime done_ns = 0;
};

const char* to_string(TxnKind k);
const char* to_string(TxnSource s);

}  // namespace mqflash::flash
