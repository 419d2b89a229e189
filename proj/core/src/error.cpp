#include "bubbles/error.hpp"

namespace bubbles {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_month: return "MissingMonth";
    case ErrorCode::duplicate_date: return "DuplicateDate";
    case ErrorCode::non_numeric_value: return "NonNumericValue";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::bad_date: return "BadDate";
    case ErrorCode::missing_column: return "MissingColumn";
    case ErrorCode::non_positive_value: return "NonPositiveValue";
    case ErrorCode::series_too_short: return "SeriesTooShort";
    case ErrorCode::range_too_short: return "RangeTooShort";
    case ErrorCode::range_mismatch: return "RangeMismatch";
    case ErrorCode::break_out_of_range: return "BreakOutOfRange";
    case ErrorCode::window_too_short: return "WindowTooShort";
    case ErrorCode::singular_design: return "SingularDesign";
    case ErrorCode::insufficient_reps: return "InsufficientReps";
    case ErrorCode::invalid_config: return "ConfigInvalid";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::episode_out_of_range: return "EpisodeOutOfRange";
    case ErrorCode::all_same_outcome: return "AllSameOutcome";
    case ErrorCode::perfect_separation: return "PerfectSeparation";
    case ErrorCode::collinear_covariates: return "CollinearCovariates";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::not_converged: return "NotConverged";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::cache_mismatch: return "CacheMismatch";
    case ErrorCode::io: return "IoError";
    case ErrorCode::internal: return "InternalError";
  }
  return "UnknownError";
}

}  // namespace bubbles
