#pragma once

#include <stdexcept>
#include <string>

namespace pasrec {

/// Failure categories shared across the library. The CLI maps these to
/// process exit codes (validation/config -> 2, numerical failure -> 3,
/// missing required parameter -> 4).
enum class errc {
  // admissibility
  reject_positivity,
  reject_support,
  reject_budget,
  // forward solver
  bad_k,
  bad_z,
  singular_system,
  // eigensolver
  resolution_exceeded,
  nonconvergence,
  // reconstruction
  freq_mismatch,
  zero_mode,
  extrapolation_unstable,
  missing_pair,
  // stability
  zero_source,
  tail_not_resolved,
  domain_error,
  insufficient_band,
  // continuation
  contour_too_close,
  winding_ambiguous,
  no_convergence,
  strip_violation,
  range_error,
  // plumbing
  bad_config,
  io_error,
  missing_parameter,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace pasrec
