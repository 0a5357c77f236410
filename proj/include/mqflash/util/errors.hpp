#pragma once

#include <stdexcept>

namespace mqflash {

// Base for everything this library throws on purpose.
struct SimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// sim: event scheduled before the current clock
struct SchedulingInPast : SimError { using SimError::SimError; };
// flash: transaction target outside the configured geometry
struct OutOfGeometry : SimError { using SimError::SimError; };
// host: request offset/length not sector-aligned, or zero length
struct UnalignedAccess : SimError { using SimError::SimError; };
// ftl: no erased block available and garbage collection cannot free one
struct OutOfSpace : SimError { using SimError::SimError; };
// harness: bad key, bad value, or inconsistent configuration
struct ConfigError : SimError { using SimError::SimError; };
// trace: malformed line; message carries the 1-based line number
struct ParseError : SimError { using SimError::SimError; };
// trace: a field that must be non-negative came in negative
struct NegativeField : ParseError { using ParseError::ParseError; };
// sampler: sample-size formula undefined (mean 0 with spread)
struct ZeroMeanPositiveVariance : SimError { using SimError::SimError; };
// metrics: rate over an empty time span
struct ZeroSpan : SimError { using SimError::SimError; };
// synth: generator name not in the registry
struct UnknownGenerator : SimError { using SimError::SimError; };
// report/trace: file could not be opened or written
struct IoFailure : SimError { using SimError::SimError; };

}  // namespace mqflash
