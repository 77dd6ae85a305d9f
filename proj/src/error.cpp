#include "balance_nets/error.hpp"

namespace balance_nets {

  std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
      case ErrorCode::invalid_input:
        return "invalid_input";
      case ErrorCode::validation:
        return "validation";
      case ErrorCode::parse:
        return "parse";
      case ErrorCode::bound_exceeded:
        return "bound_exceeded";
      case ErrorCode::mismatched_group:
        return "mismatched_group";
      case ErrorCode::singular:
        return "singular";
      case ErrorCode::not_potential:
        return "not_potential";
      case ErrorCode::domain:
        return "domain";
      case ErrorCode::numerical:
        return "numerical";
    }
    return "unknown";
  }

}  // namespace balance_nets
