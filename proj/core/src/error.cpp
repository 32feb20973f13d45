#include "poromech/error.hpp"

namespace poromech {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::degenerate_mesh: return "degenerate mesh";
    case ErrorKind::degenerate_cell: return "degenerate cell";
    case ErrorKind::parse_error: return "parse error";
    case ErrorKind::tpfa_inapplicable: return "tpfa inapplicable";
    case ErrorKind::partition_impossible: return "partition impossible";
    case ErrorKind::disconnected_region: return "disconnected region";
    case ErrorKind::rigid_mode: return "rigid mode";
    case ErrorKind::numerical_breakdown: return "numerical breakdown";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::preconditioner_build: return "preconditioner build";
    case ErrorKind::internal: return "internal error";
  }
  return "unknown";
}

}  // namespace poromech
