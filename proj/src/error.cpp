#include "fuzzyref/error.hpp"

namespace fuzzyref {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Usage:
      return "usage";
    case ErrorKind::Contract:
      return "contract";
    case ErrorKind::Domain:
      return "domain";
    case ErrorKind::Numeric:
      return "numeric";
    case ErrorKind::Unsupported:
      return "unsupported";
    case ErrorKind::Io:
      return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace fuzzyref
