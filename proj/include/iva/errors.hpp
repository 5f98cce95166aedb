#pragma once

#include <stdexcept>
#include <string>

namespace iva {

/// Base class for every failure raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- linear algebra ---
struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct SingularMatrix : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct NumericalBreakdown : Error { using Error::Error; };

// --- scalar / model domain ---
struct DomainError : Error { using Error::Error; };

// --- solver structure ---
struct OddChannelCount : Error { using Error::Error; };
struct IndivisibleBlock : Error { using Error::Error; };

// --- signals and files ---
struct ShapeMismatch : Error { using Error::Error; };
struct SignalTooShort : Error { using Error::Error; };
struct UnsupportedFormat : Error { using Error::Error; };
struct CorruptHeader : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

// --- metrics ---
struct ZeroReference : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

// --- configuration ---
struct ConfigError : Error { using Error::Error; };

}  // namespace iva
