#pragma once

#include <stdexcept>
#include <string>

namespace noisytd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimMismatch : Error { using Error::Error; };
struct NonNormalized : Error { using Error::Error; };
struct DuplicatePoint : Error { using Error::Error; };
struct ZeroWeight : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NotMonotone : Error { using Error::Error; };
struct InfeasibleParameters : Error { using Error::Error; };
struct GenerationFailed : Error { using Error::Error; };
struct EmptyHypothesisClass : Error { using Error::Error; };
struct ExplosionGuard : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct InvariantFailure : Error { using Error::Error; };
struct EmptyReport : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

}  // namespace noisytd
