#pragma once

// Deterministic weight generators.
//
// Every generator draws from std::mt19937_64 seeded through std::seed_seq with
// the four 32-bit words {seed_lo, seed_hi, q_lo, q_hi}; both algorithms are
// fixed by the C++ standard, so a (seed, q) pair gives the same raw stream on
// every platform. Draws map to weights as
//   const: 1 (no draws)
//   pm1:   +1 if the top bit of the draw is 0, else -1
//   unit:  exp(2 pi i u) with u = (draw >> 11) * 2^-53
//   zero:  0 (no draws)

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "klsum/bilinear.hpp"

namespace klsum {

enum class WeightKind { constant, pm1, unit, zero };

std::string_view weight_kind_name(WeightKind kind) noexcept;
WeightKind parse_weight_kind(std::string_view name);

std::mt19937_64 weight_engine(std::uint64_t seed, std::int64_t q);

std::vector<cplx> generate_weights(WeightKind kind, std::size_t count, std::uint64_t seed, std::int64_t q);

/// Weights on the first `support` units of Z_q (in increasing order).
WeightVector make_weights(const Modulus& q, std::int64_t support, WeightKind kind, std::uint64_t seed);

/// Weights on the first `support` primitive characters mod q (enumeration order).
CharWeightVector make_char_weights(const Modulus& q, std::int64_t support, WeightKind kind, std::uint64_t seed);

}  // namespace klsum
