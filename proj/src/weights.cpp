#include "klsum/weights.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "klsum/error.hpp"

namespace klsum {

std::string_view weight_kind_name(WeightKind kind) noexcept {
  switch (kind) {
    case WeightKind::constant: return "const";
    case WeightKind::pm1: return "pm1";
    case WeightKind::unit: return "unit";
    case WeightKind::zero: return "zero";
  }
  return "const";
}

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "const") return WeightKind::constant;
  if (name == "pm1") return WeightKind::pm1;
  if (name == "unit") return WeightKind::unit;
  if (name == "zero") return WeightKind::zero;
  throw_error(ErrorKind::invalid_input, "unknown weight kind '" + std::string(name) + "' (const|pm1|unit|zero)");
}

std::mt19937_64 weight_engine(std::uint64_t seed, std::int64_t q) {
  const auto uq = static_cast<std::uint64_t>(q);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                    static_cast<std::uint32_t>(uq), static_cast<std::uint32_t>(uq >> 32U)};
  return std::mt19937_64(seq);
}

std::vector<cplx> generate_weights(WeightKind kind, std::size_t count, std::uint64_t seed, std::int64_t q) {
  std::vector<cplx> out(count, cplx{1.0, 0.0});
  if (kind == WeightKind::constant) return out;
  if (kind == WeightKind::zero) return std::vector<cplx>(count, cplx{0.0, 0.0});
  auto engine = weight_engine(seed, q);
  for (auto& w : out) {
    const std::uint64_t draw = engine();
    if (kind == WeightKind::pm1) {
      w = (draw >> 63U) == 0 ? cplx{1.0, 0.0} : cplx{-1.0, 0.0};
    } else {
      const double u = static_cast<double>(draw >> 11U) * 0x1.0p-53;
      const double angle = 2.0 * std::numbers::pi * u;
      w = {std::cos(angle), std::sin(angle)};
    }
  }
  return out;
}

WeightVector make_weights(const Modulus& q, std::int64_t support, WeightKind kind, std::uint64_t seed) {
  const auto units = q.units();
  if (support < 0 || support > static_cast<std::int64_t>(units.size())) {
    throw_error(ErrorKind::invalid_input, "weight support " + std::to_string(support) + " exceeds phi(" +
                                              std::to_string(q.value()) + ") = " + std::to_string(units.size()));
  }
  const auto values = generate_weights(kind, static_cast<std::size_t>(support), seed, q.value());
  WeightVector a(q);
  for (std::size_t i = 0; i < values.size(); ++i) a.set(units[i], values[i]);
  return a;
}

CharWeightVector make_char_weights(const Modulus& q, std::int64_t support, WeightKind kind, std::uint64_t seed) {
  const auto prims = primitive_characters(q);
  if (support < 0 || support > static_cast<std::int64_t>(prims.size())) {
    throw_error(ErrorKind::invalid_input, "character weight support " + std::to_string(support) +
                                              " exceeds the " + std::to_string(prims.size()) +
                                              " primitive characters modulo " + std::to_string(q.value()));
  }
  const auto values = generate_weights(kind, static_cast<std::size_t>(support), seed, q.value());
  CharWeightVector w(q);
  for (std::size_t i = 0; i < values.size(); ++i) w.set(prims[i], values[i]);
  return w;
}

}  // namespace klsum
