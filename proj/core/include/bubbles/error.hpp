#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bubbles {

/// Failure categories raised by the library. The CLI maps every code except
/// `internal` to the user-error exit status.
enum class ErrorCode {
  missing_month,
  duplicate_date,
  non_numeric_value,
  empty_input,
  bad_date,
  missing_column,
  non_positive_value,
  series_too_short,
  range_too_short,
  range_mismatch,
  break_out_of_range,
  window_too_short,
  singular_design,
  insufficient_reps,
  invalid_config,
  length_mismatch,
  episode_out_of_range,
  all_same_outcome,
  perfect_separation,
  collinear_covariates,
  no_convergence,
  not_converged,
  insufficient_data,
  cache_mismatch,
  io,
  internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace bubbles
