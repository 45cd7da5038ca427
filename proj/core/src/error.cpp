#include "strf/error.hpp"

namespace strf {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::capacity:
      return 2;
    case ErrorKind::numerical:
      return 3;
    case ErrorKind::consistency:
      return 4;
  }
  return 4;
}

const char* kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::capacity: return "capacity";
  }
  return "unknown";
}

}  // namespace strf
