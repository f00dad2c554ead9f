#pragma once

#include <stdexcept>
#include <string>

namespace hitchin {

// Base for all library errors; everything thrown on purpose derives from it.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHyperbolicGenerator : Error { using Error::Error; };
struct CuspedOrDegenerate : Error { using Error::Error; };
struct Reducible : Error { using Error::Error; };
struct BoundaryMismatch : Error { using Error::Error; };

struct EigenFailure : Error { using Error::Error; };
struct NotLoxodromic : Error { using Error::Error; };
struct ComplexSpectrum : Error { using Error::Error; };

struct ResourceCapExceeded : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

struct IoError : Error { using Error::Error; };
struct FormatVersionMismatch : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace hitchin
