#pragma once

#include <stdexcept>
#include <string>

namespace choquard {

/// Failure categories surfaced by the library. Each maps onto one class of
/// precondition or contract violation so callers can test for it.
enum class ErrorCode {
  unsupported_dimension,
  invalid_grid,
  invalid_exponent,
  shape_mismatch,
  oracle_refused,
  nonsmooth_exponent,
  degenerate_field,
  refused_regime,
  stalled,
  not_on_manifold,
  shift_out_of_range,
  grid_too_small,
  corrupt_snapshot,
  invalid_config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace choquard
