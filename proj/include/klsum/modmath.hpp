#pragma once

// Modular arithmetic substrate: moduli with cached factorization, inverses,
// the additive character e_q and the distance to the nearest multiple of q.

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace klsum {

using cplx = std::complex<double>;

struct PrimePower {
  std::int64_t prime;
  int exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Largest modulus accepted by Modulus. Factorization is plain trial
/// division, which stays below 10^6 divisions at this size; the lazily
/// built tables (roots, inverses, discrete logs) hold O(q) entries and are
/// meant for desk-scale q (up to about 10^7).
inline constexpr std::int64_t kMaxModulus = 1'000'000'000'000;

/// Canonical factorization of n >= 2, primes ascending.
std::vector<PrimePower> factorize(std::int64_t n);

/// Least non-negative residue of z modulo q.
constexpr std::int64_t reduce(std::int64_t z, std::int64_t q) noexcept {
  std::int64_t r = z % q;
  return r < 0 ? r + q : r;
}

__extension__ using int128 = __int128;

/// a*b mod q without overflow for q < 2^63.
constexpr std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t q) noexcept {
  return static_cast<std::int64_t>(static_cast<int128>(reduce(a, q)) * reduce(b, q) % q);
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exponent, std::int64_t q) noexcept;

/// Multiplicative structure of one prime-power factor p^e of q.
/// generators[j] has multiplicative order orders[j] modulo modulus_part, and
/// every unit of Z_{p^e} is uniquely prod_j generators[j]^{k_j} with
/// 0 <= k_j < orders[j].
struct UnitComponent {
  std::int64_t prime = 0;
  int exponent = 0;
  std::int64_t modulus_part = 0;
  std::vector<std::int64_t> generators;
  std::vector<std::int64_t> orders;
};

class UnitGroupStructure {
 public:
  UnitGroupStructure() = default;
  UnitGroupStructure(std::int64_t q, std::vector<UnitComponent> components);

  std::int64_t modulus() const noexcept { return q_; }
  const std::vector<UnitComponent>& components() const noexcept { return components_; }

  /// Total number of generators over all components.
  std::size_t rank() const noexcept { return orders_.size(); }
  /// Generator orders flattened in component order.
  const std::vector<std::int64_t>& orders() const noexcept { return orders_; }

  /// Exponent of the group: lcm of all generator orders.
  std::int64_t exponent() const noexcept { return exponent_; }

  /// Exponent tuple (flattened, one entry per generator) of a unit x.
  /// Throws NotAUnit when gcd(x, q) > 1.
  std::vector<std::int64_t> discrete_log(std::int64_t x) const;

  /// Non-allocating discrete_log; out.size() must equal rank().
  void discrete_log_into(std::int64_t x, std::span<std::int64_t> out) const;

  /// Exponents of a residue r modulo one component's p^e, written to out
  /// (out.size() = that component's generator count). Throws for non-units.
  void component_log(std::size_t component, std::int64_t r, std::span<std::int64_t> out) const;

  /// Inverse of discrete_log: the unit in [1, q-1] with the given tuple.
  std::int64_t from_exponents(std::span<const std::int64_t> exponents) const;

 private:
  std::int64_t q_ = 0;
  std::vector<UnitComponent> components_;
  std::vector<std::int64_t> orders_;
  std::int64_t exponent_ = 1;
  // Per component, per residue r mod p^e: packed exponent index (or -1).
  std::vector<std::vector<std::int64_t>> log_tables_;
};

/// An integer modulus q >= 2. Factorization and phi are computed eagerly;
/// the unit group, inverse table and root table are built on first use and
/// shared between copies. All members are safe to call concurrently.
class Modulus {
 public:
  explicit Modulus(std::int64_t q);

  std::int64_t value() const noexcept { return q_; }
  std::int64_t phi() const noexcept { return phi_; }
  const std::vector<PrimePower>& factors() const noexcept;
  bool is_prime() const noexcept { return prime_; }
  bool is_unit(std::int64_t x) const noexcept;

  const UnitGroupStructure& unit_group() const;

  /// inverse[x] = x^{-1} mod q for units, 0 elsewhere; length q.
  std::span<const std::int64_t> inverses() const;

  /// roots[r] = eq_exp(r, q) for r in [0, q), bit-identical to eq_exp.
  std::span<const cplx> roots() const;

  /// Units of Z_q in increasing order.
  std::span<const std::int64_t> units() const;

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
    return a.value() == b.value();
  }

 private:
  struct State;
  std::int64_t q_;
  std::int64_t phi_;
  bool prime_;
  std::shared_ptr<State> state_;
};

/// x^{-1} mod q in [1, q-1]; NotAUnit when gcd(x, q) > 1.
std::int64_t mod_inv(std::int64_t x, const Modulus& q);
std::int64_t mod_inv(std::int64_t x, std::int64_t q);

/// e_q(z) = exp(2 pi i z / q), evaluated from z mod q with exact quarter-turn
/// symmetry, so multiples of q/4 give exactly 1, i, -1, -i.
cplx eq_exp(std::int64_t z, std::int64_t q) noexcept;
inline cplx eq_exp(std::int64_t z, const Modulus& q) noexcept { return eq_exp(z, q.value()); }

/// <u>_q = min_k |u - kq|, in [0, q/2].
std::int64_t dist_q(std::int64_t u, std::int64_t q) noexcept;
inline std::int64_t dist_q(std::int64_t u, const Modulus& q) noexcept {
  return dist_q(u, q.value());
}

/// Representative of u mod q in (-q/2, q/2].
std::int64_t centered(std::int64_t u, std::int64_t q) noexcept;

inline const UnitGroupStructure& unit_group(const Modulus& q) { return q.unit_group(); }

}  // namespace klsum
