#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsync {

enum class ErrorKind {
  invalid_argument,
  space_mismatch,
  truncation,
  degenerate_steady_state,
  not_converged,
  step_underflow,
  blow_up,
  insufficient_decay,
  not_settled,
  degenerate_variance,
  no_locked_solution,
  out_of_validity,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the toolkit. The kind is what
/// sweeps record per cell as `error:<kind>`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qsync
