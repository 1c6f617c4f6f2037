#include "qsync/errors.hpp"

namespace qsync {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::space_mismatch: return "space_mismatch";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::degenerate_steady_state: return "degenerate_steady_state";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::insufficient_decay: return "insufficient_decay";
    case ErrorKind::not_settled: return "not_settled";
    case ErrorKind::degenerate_variance: return "degenerate_variance";
    case ErrorKind::no_locked_solution: return "no_locked_solution";
    case ErrorKind::out_of_validity: return "out_of_validity";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace qsync
