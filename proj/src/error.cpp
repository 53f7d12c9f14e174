#include "klsum/error.hpp"

namespace klsum {

std::string_view error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::not_a_unit: return "not_a_unit";
    case ErrorKind::domain_restriction: return "domain_restriction";
    case ErrorKind::resource_limit: return "resource_limit";
    case ErrorKind::invalid_weight: return "invalid_weight";
    case ErrorKind::modulus_mismatch: return "modulus_mismatch";
    case ErrorKind::path_disagreement: return "path_disagreement";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

int error_exit_code(ErrorKind kind) noexcept {
  return 2 + static_cast<int>(kind);
}

NotAUnit::NotAUnit(std::int64_t value, std::int64_t modulus, std::int64_t gcd)
    : Error(ErrorKind::not_a_unit, std::to_string(value) + " is not a unit modulo " +
                                       std::to_string(modulus) + " (gcd " +
                                       std::to_string(gcd) + ")"),
      value_(value),
      gcd_(gcd) {}

void throw_error(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace klsum
