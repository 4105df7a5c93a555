#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

// Each failure mode named by the library has its own type so callers can
// recover selectively (the sweep driver records per-trial failures in rows).

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : Error { using Error::Error; };
struct DecompositionError : Error { using Error::Error; };
struct SingularError : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct PairingError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SpecError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace qsc
