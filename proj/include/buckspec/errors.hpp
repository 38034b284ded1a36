#pragma once

#include <stdexcept>
#include <string>

namespace buckspec {

enum class errc {
  non_positive_value,
  out_of_order,
  empty,
  target_below_max,
  n_too_large,
  quadrature_inexact,
  conditioning,
  k_too_large,
  mode_cutoff_too_low,
  ill_proportioned,
  rule_not_applicable,
  bad_delta_seq,
  degenerate,
  unbounded_for_delta,
  no_bracket,
  infeasible_prefix,
  insufficient_values,
  invalid_order,
  file_not_found,
  no_axis,
  invalid_argument,
};

inline const char* to_string(errc c) {
  switch (c) {
    case errc::non_positive_value: return "NON_POSITIVE_VALUE";
    case errc::out_of_order: return "OUT_OF_ORDER";
    case errc::empty: return "EMPTY";
    case errc::target_below_max: return "TARGET_BELOW_MAX";
    case errc::n_too_large: return "N_TOO_LARGE";
    case errc::quadrature_inexact: return "QUADRATURE_INEXACT";
    case errc::conditioning: return "CONDITIONING";
    case errc::k_too_large: return "K_TOO_LARGE";
    case errc::mode_cutoff_too_low: return "MODE_CUTOFF_TOO_LOW";
    case errc::ill_proportioned: return "ILL_PROPORTIONED";
    case errc::rule_not_applicable: return "RULE_NOT_APPLICABLE";
    case errc::bad_delta_seq: return "BAD_DELTA_SEQ";
    case errc::degenerate: return "DEGENERATE";
    case errc::unbounded_for_delta: return "UNBOUNDED_FOR_DELTA";
    case errc::no_bracket: return "NO_BRACKET";
    case errc::infeasible_prefix: return "INFEASIBLE_PREFIX";
    case errc::insufficient_values: return "INSUFFICIENT_VALUES";
    case errc::invalid_order: return "INVALID_ORDER";
    case errc::file_not_found: return "FILE_NOT_FOUND";
    case errc::no_axis: return "NO_AXIS";
    case errc::invalid_argument: return "INVALID_ARGUMENT";
  }
  return "UNKNOWN";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  errc code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  errc code_;
  std::string message_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace buckspec
