#pragma once

// Complete Kloosterman sums, Dirichlet characters and Gauss sums.

#include <compare>
#include <cstdint>
#include <iterator>
#include <span>
#include <vector>

#include "klsum/modmath.hpp"
#include "klsum/summation.hpp"

namespace klsum {

/// A Dirichlet character mod q, stored as exponents against the generators
/// of unit_group(q): chi(prod g_j^{k_j}) = prod e(a_j k_j / ord_j).
class DirichletCharacter {
 public:
  DirichletCharacter(Modulus q, std::vector<std::int64_t> exponents);

  const Modulus& modulus() const noexcept { return q_; }
  const std::vector<std::int64_t>& exponents() const noexcept { return exponents_; }

  std::int64_t conductor() const noexcept { return conductor_; }
  bool is_primitive() const noexcept { return conductor_ == q_.value(); }
  bool is_principal() const noexcept;

  /// Order of chi in the character group.
  std::int64_t order() const noexcept { return order_; }

  /// chi(x) = e_L(phase(x)) with L = unit_group().exponent(); -1 for non-units.
  std::int64_t phase(std::int64_t x) const;

  /// chi(x); zero when gcd(x, q) > 1.
  cplx operator()(std::int64_t x) const;

  /// chi(x) for every residue x in [0, q).
  std::vector<cplx> values() const;

  /// The conjugate character.
  DirichletCharacter conj() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) noexcept {
    return a.q_ == b.q_ && a.exponents_ == b.exponents_;
  }
  friend auto operator<=>(const DirichletCharacter& a, const DirichletCharacter& b) noexcept {
    if (auto c = a.q_.value() <=> b.q_.value(); c != 0) return c;
    return a.exponents_ <=> b.exponents_;
  }

 private:
  Modulus q_;
  std::vector<std::int64_t> exponents_;
  std::vector<std::int64_t> scaled_;  // a_j * L / ord_j mod L
  std::int64_t conductor_ = 1;
  std::int64_t order_ = 1;
};

inline cplx char_eval(const DirichletCharacter& chi, std::int64_t x) { return chi(x); }

/// All phi(q) characters mod q in a fixed order: exponent tuples in
/// lexicographic order (the last generator varies fastest), so the principal
/// character comes first.
class CharacterRange {
 public:
  explicit CharacterRange(Modulus q);

  std::size_t size() const noexcept { return count_; }
  DirichletCharacter at(std::size_t index) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = DirichletCharacter;
    using difference_type = std::ptrdiff_t;

    iterator(const CharacterRange* range, std::size_t index) : range_(range), index_(index) {}
    DirichletCharacter operator*() const { return range_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto old = *this;
      ++index_;
      return old;
    }
    friend bool operator==(const iterator& a, const iterator& b) noexcept { return a.index_ == b.index_; }

   private:
    const CharacterRange* range_;
    std::size_t index_;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }

 private:
  Modulus q_;
  std::vector<std::int64_t> orders_;
  std::size_t count_;
};

inline CharacterRange characters(const Modulus& q) { return CharacterRange(q); }

/// The primitive characters mod q, in enumeration order.
std::vector<DirichletCharacter> primitive_characters(const Modulus& q);

/// K_q(m, n) = sum over units x of e_q(m x + n x^{-1}), evaluated directly.
SumResult kloosterman(const Modulus& q, std::int64_t m, std::int64_t n);

enum class RowMethod { automatic, direct, fft };

/// Above this modulus the automatic row method switches from direct sums to the DFT.
inline constexpr std::int64_t kRowFftThreshold = 64;

/// K_q(m, n) for every m in [0, q). The fft path transforms the sequence
/// x -> e_q(n x^{-1}) (zero off the units); automatic picks fft for q > kRowFftThreshold.
std::vector<cplx> kloosterman_row(const Modulus& q, std::int64_t n, RowMethod method = RowMethod::automatic);

/// Per-entry absolute error budget of the fft row path.
double kloosterman_row_error_bound(const Modulus& q);

/// max |K_q(m, n)| over all m in Z_q and n in [first_n, last_n]. For prime q
/// and unit n, K_q(m, n) = K_q(mn, 1), so one row suffices.
double kloosterman_max_abs(const Modulus& q, std::int64_t first_n, std::int64_t last_n);

/// G_q(chi, n) = sum over units x of chi(x) e_q(n x), evaluated directly.
SumResult gauss(const Modulus& q, const DirichletCharacter& chi, std::int64_t n);

/// Same sum from a precomputed value table chi_values[x], x in [0, q).
SumResult gauss(const Modulus& q, std::span<const cplx> chi_values, std::int64_t n);

/// conj(chi(n)) * G_q(chi, 1): equals G_q(chi, n) for primitive chi or unit n.
/// Used as an independent cross-check of the direct evaluation.
cplx gauss_twisted(const Modulus& q, const DirichletCharacter& chi, std::int64_t n);

/// |K_q(m, n)| / (2 sqrt q). Only defined for prime q and units m, n;
/// anything else raises a domain_restriction error.
double weil_ratio(const Modulus& q, std::int64_t m, std::int64_t n);

}  // namespace klsum
