#include "fpa/error.hpp"

namespace fpa {

std::string_view error_tag(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::InvalidModulus: return "invalid-modulus";
    case ErrorKind::InvalidQuotient: return "invalid-quotient";
    case ErrorKind::ModulusMismatch: return "modulus-mismatch";
    case ErrorKind::Parse: return "parse-error";
    case ErrorKind::InsufficientPrecision: return "insufficient-precision";
    case ErrorKind::OutOfWindow: return "out-of-window";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::WindowTooNarrow: return "window-too-narrow";
    case ErrorKind::NotOrderP: return "not-order-p";
    case ErrorKind::NonCommuting: return "non-commuting";
    case ErrorKind::MalformedSpec: return "malformed-spec";
    case ErrorKind::NotUnipotent: return "not-unipotent";
    case ErrorKind::NonInvariant: return "non-invariant";
    case ErrorKind::SingularGenerator: return "singular-generator";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    case ErrorKind::EmptyFixedSpace: return "empty-fixed-space-at-window";
    case ErrorKind::BudgetExceeded: return "budget-exceeded";
    case ErrorKind::UnknownExample: return "unknown-example";
    case ErrorKind::Io: return "io-error";
  }
  return "unknown";
}

}  // namespace fpa
