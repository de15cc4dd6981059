#pragma once

#include <stdexcept>
#include <string>

namespace tempopt {

// Error categories raised by the library. Callers that need to branch on
// the failure mode should catch tempopt::Error and inspect code().
enum class Errc {
  missing_column,
  bad_date,
  empty_input,
  too_few_points,
  cutoff_out_of_range,
  too_few_years,
  singular_design,
  non_stationary,
  negative_autocorr,
  empty_bucket,
  prob_overflow,
  window_out_of_range,
  empty_path_set,
  zero_price,
  empty_overlap,
  config_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::missing_column: return "MissingColumn";
    case Errc::bad_date: return "BadDate";
    case Errc::empty_input: return "EmptyInput";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::cutoff_out_of_range: return "CutoffOutOfRange";
    case Errc::too_few_years: return "TooFewYears";
    case Errc::singular_design: return "SingularDesign";
    case Errc::non_stationary: return "NonStationary";
    case Errc::negative_autocorr: return "NegativeAutocorr";
    case Errc::empty_bucket: return "EmptyBucket";
    case Errc::prob_overflow: return "ProbOverflow";
    case Errc::window_out_of_range: return "WindowOutOfRange";
    case Errc::empty_path_set: return "EmptyPathSet";
    case Errc::zero_price: return "ZeroPrice";
    case Errc::empty_overlap: return "EmptyOverlap";
    case Errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tempopt
