#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace klsum {

enum class ErrorKind {
  invalid_input,
  not_a_unit,
  domain_restriction,
  resource_limit,
  invalid_weight,
  modulus_mismatch,
  path_disagreement,
  io,
  config,
};

/// Machine-readable name of an error category, e.g. "not_a_unit".
std::string_view error_kind_name(ErrorKind kind) noexcept;

/// Process exit code used by the CLI for each category (always nonzero).
int error_exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class NotAUnit : public Error {
 public:
  NotAUnit(std::int64_t value, std::int64_t modulus, std::int64_t gcd);

  std::int64_t value() const noexcept { return value_; }
  std::int64_t gcd() const noexcept { return gcd_; }

 private:
  std::int64_t value_;
  std::int64_t gcd_;
};

[[noreturn]] void throw_error(ErrorKind kind, const std::string& what);

}  // namespace klsum
