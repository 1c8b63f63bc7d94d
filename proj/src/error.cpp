#include "hrg/error.hpp"

namespace hrg {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::degenerate_levels: return "degenerate_levels";
    case ErrorCode::guard_exceeded: return "guard_exceeded";
    case ErrorCode::not_converged: return "not_converged";
    case ErrorCode::io: return "io";
    case ErrorCode::format: return "format";
    case ErrorCode::no_center: return "no_center";
    case ErrorCode::unchecked_demand: return "unchecked_demand";
    case ErrorCode::disconnected: return "disconnected";
    case ErrorCode::internal: return "internal";
  }
  return "unknown error";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace hrg
