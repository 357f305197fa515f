#include "choquard/errors.hpp"

namespace choquard {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unsupported_dimension: return "unsupported-dimension";
    case ErrorCode::invalid_grid: return "invalid-grid";
    case ErrorCode::invalid_exponent: return "invalid-exponent";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::oracle_refused: return "oracle-refused";
    case ErrorCode::nonsmooth_exponent: return "nonsmooth-exponent";
    case ErrorCode::degenerate_field: return "degenerate-field";
    case ErrorCode::refused_regime: return "refused-regime";
    case ErrorCode::stalled: return "stalled";
    case ErrorCode::not_on_manifold: return "not-on-manifold";
    case ErrorCode::shift_out_of_range: return "shift-out-of-range";
    case ErrorCode::grid_too_small: return "grid-too-small";
    case ErrorCode::corrupt_snapshot: return "corrupt-snapshot";
    case ErrorCode::invalid_config: return "invalid-config";
  }
  return "unknown-error";
}

}  // namespace choquard
