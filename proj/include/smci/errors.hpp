#pragma once

#include <stdexcept>
#include <string>

namespace smci {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: bad vertex ids, empty sample sets, mismatched sizes, ...
struct ArgumentError : Error {
  using Error::Error;
};

// A request would exceed an enumeration cap (region size or vertex count).
struct CapacityError : Error {
  using Error::Error;
};

}  // namespace smci
