#pragma once

// Exact counts of solutions to the reciprocal-sum and product congruences
//   1/x_1 + ... + 1/x_r = 1/x_{r+1} + ... + 1/x_{2r}   (mod q)     J_r(q; K)
//   x_1 ... x_r         = x_{r+1} ... x_{2r}           (mod q)     R_r(q; K)
// and of the matching equations over the integers / rationals.
//
// Variables range over the admissible base {x in [1, K] : gcd(x, q) = 1}.
// All arithmetic is exact 64-bit integer arithmetic; any count that could
// exceed 2^64 - 1 is refused with resource_limit.

#include <cstdint>
#include <map>
#include <vector>

#include "klsum/modmath.hpp"

namespace klsum {

enum class CountKind { reciprocal, product };
enum class CountMethod { convolution, exhaustive };

inline constexpr double kExhaustiveTupleCap = 1e8;
inline constexpr std::int64_t kConvolutionMaxModulus = 1'000'000;
inline constexpr int kConvolutionMaxDepth = 4;
/// Cap on K^r, the number of r-tuples hashed by the equation counters.
inline constexpr double kEquationTupleCap = 1e7;

/// Distribution N(s) of r-fold inverse sums (or products) of base elements.
class CountTable {
 public:
  CountTable(const Modulus& q, std::int64_t k, int depth, CountKind kind);

  const Modulus& modulus() const noexcept { return q_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::int64_t base_size() const noexcept { return base_size_; }
  int depth() const noexcept { return depth_; }

  std::uint64_t total() const noexcept;
  /// sum_s N(s)^2, the number of 2r-tuples whose two halves agree.
  std::uint64_t collisions() const noexcept;

 private:
  Modulus q_;
  std::int64_t base_size_ = 0;
  int depth_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// {x in [1, K] : gcd(x, q) = 1}.
std::vector<std::int64_t> admissible_base(const Modulus& q, std::int64_t k);

std::uint64_t congruence_count(const Modulus& q, std::int64_t k, int r, CountKind kind, CountMethod method);

inline std::uint64_t jr_congruence(const Modulus& q, std::int64_t k, int r, CountMethod method = CountMethod::convolution) {
  return congruence_count(q, k, r, CountKind::reciprocal, method);
}
inline std::uint64_t rr_congruence(const Modulus& q, std::int64_t k, int r, CountMethod method = CountMethod::convolution) {
  return congruence_count(q, k, r, CountKind::product, method);
}

/// J_r(K): solutions over the rationals, 1 <= x_i <= K.
std::uint64_t jr_equation(std::int64_t k, int r);
/// R_r(K): solutions over the integers, 1 <= x_i <= K.
std::uint64_t rr_equation(std::int64_t k, int r);

struct DyadicAverage {
  std::int64_t big_q = 0;
  std::uint64_t total = 0;  // sum of the per-q counts
  std::map<std::int64_t, std::uint64_t> per_q;

  /// mean = total / Q as a reduced fraction.
  std::uint64_t mean_numerator() const noexcept;
  std::uint64_t mean_denominator() const noexcept;
  double mean() const noexcept { return static_cast<double>(total) / static_cast<double>(big_q); }
};

/// Per-q counts J_{r,q}(K) (or R_{r,q}(K)) for Q <= q <= 2Q and their mean
/// (1/Q) sum_q count.
DyadicAverage dyadic_average(std::int64_t big_q, std::int64_t k, int r, CountKind kind);

}  // namespace klsum
