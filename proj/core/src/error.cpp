#include "trymove/error.hpp"

namespace trymove {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_gesture: return "invalid-gesture";
    case ErrorKind::parse: return "parse";
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::infeasible_puzzle: return "infeasible-puzzle";
    case ErrorKind::spawn_region_too_small: return "spawn-region-too-small";
    case ErrorKind::schema: return "schema";
    case ErrorKind::session_closed: return "session-closed";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::hint_unavailable: return "hint-unavailable";
    case ErrorKind::invalid_time: return "invalid-time";
    case ErrorKind::shape: return "shape";
    case ErrorKind::no_data: return "no-data";
    case ErrorKind::validation: return "validation";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::conflict: return "conflict";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace trymove
