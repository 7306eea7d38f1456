#pragma once

#include <stdexcept>
#include <string>

namespace wkde {

//! Error conditions raised by the library. Each code belongs to one of the
//! three failure categories that the command line maps onto exit codes.
enum class Errc
{
  // usage / configuration
  config_error,
  invalid_parameter,
  unknown_name,
  // data
  file_not_found,
  unknown_column,
  parse_error,
  empty_sample,
  dimension_mismatch,
  insufficient_sample,
  length_mismatch,
  insufficient_points,
  at_kink_point,
  // numeric degeneracy
  degenerate_curvature,
  degenerate_kernel,
  zero_spread,
  non_integrable,
};

enum class ErrorCategory
{
  usage,
  data,
  numeric
};

const char* errc_name(Errc code);
ErrorCategory errc_category(Errc code);

class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what)
    , code_(code)
  {}

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return errc_category(code_); }

private:
  Errc code_;
};

//! Process exit status for an error category: 2 usage, 3 data, 4 numeric.
inline int exit_code(ErrorCategory cat)
{
  switch (cat) {
    case ErrorCategory::usage:
      return 2;
    case ErrorCategory::data:
      return 3;
    case ErrorCategory::numeric:
      return 4;
  }
  return 1;
}

} // namespace wkde
