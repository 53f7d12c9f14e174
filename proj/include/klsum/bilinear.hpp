#pragma once

// Weighted bilinear forms with Kloosterman and Gauss sums, the interval sums
// gamma_x, the dyadic decomposition of unit representatives and the
// 2r-th moment identity.

#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "klsum/expsums.hpp"
#include "klsum/modmath.hpp"
#include "klsum/summation.hpp"

namespace klsum {

struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Sparse complex weights alpha_m on units m of Z_q. Keys are reduced to
/// [0, q); a key with gcd(m, q) > 1 is rejected with invalid_weight.
class WeightVector {
 public:
  explicit WeightVector(Modulus q) : q_(std::move(q)) {}
  WeightVector(Modulus q, const std::map<std::int64_t, cplx>& entries);

  const Modulus& modulus() const noexcept { return q_; }
  const std::map<std::int64_t, cplx>& entries() const noexcept { return entries_; }

  void set(std::int64_t m, cplx weight);
  cplx at(std::int64_t m) const;

  /// Number of nonzero weights.
  std::int64_t support_size() const noexcept;
  Norms norms() const noexcept;

  /// Dense length-q vector of the weights.
  std::vector<cplx> dense() const;

  WeightVector operator+(const WeightVector& other) const;
  WeightVector scaled(cplx c) const;

 private:
  Modulus q_;
  std::map<std::int64_t, cplx> entries_;
};

/// J = {L+1, ..., L+N} inside [1, q-1].
class Interval {
 public:
  Interval(Modulus q, std::int64_t offset, std::int64_t length);

  const Modulus& modulus() const noexcept { return q_; }
  std::int64_t offset() const noexcept { return offset_; }  // L
  std::int64_t length() const noexcept { return length_; }  // N
  std::int64_t first() const noexcept { return offset_ + 1; }
  std::int64_t last() const noexcept { return offset_ + length_; }

 private:
  Modulus q_;
  std::int64_t offset_;
  std::int64_t length_;
};

/// Weights omega_chi on primitive characters mod q.
class CharWeightVector {
 public:
  explicit CharWeightVector(Modulus q) : q_(std::move(q)) {}

  const Modulus& modulus() const noexcept { return q_; }
  const std::map<DirichletCharacter, cplx>& entries() const noexcept { return entries_; }

  /// Rejects characters of another modulus or that are not primitive.
  void set(const DirichletCharacter& chi, cplx weight);

  std::int64_t support_size() const noexcept;
  Norms norms() const noexcept;

 private:
  Modulus q_;
  std::map<DirichletCharacter, cplx> entries_;
};

enum class Sign { plus, minus };

/// One of the sets X_i^+ / X_i^- of the dyadic decomposition. Members are the
/// integers of the defining range (units and non-units alike); the bilinear
/// sums only visit the unit members.
struct DyadicSet {
  int index = 0;
  Sign sign = Sign::plus;
  std::vector<std::int64_t> members;  // signed representatives in (-q/2, q/2]
};

/// |gamma_x| <= kGammaDecayConstant * e^{-i} * N for every x in X_i^{+/-}.
/// For i >= 1, |x| > e^{i-1} q/N and |gamma_x| <= q/(2|x|) give e/2; for
/// i = 0 the trivial bound N applies.
inline constexpr double kGammaDecayConstant = std::numbers::e / 2;

/// gamma_x = sum_{n in J} e_q(n x) via the closed form
/// e_{2q}((2L+N+1) x) * sin(pi N x / q) / sin(pi x / q).
/// x = 0 mod q raises domain_restriction.
cplx gamma_sum(const Interval& j, std::int64_t x);

/// gamma_x for every x in [0, q), with gamma_0 = N.
std::vector<cplx> gamma_table(const Interval& j);

/// I = max(0, ceil(log(N/2))), natural logarithm.
int dyadic_depth(std::int64_t n);

/// X_0^+, X_0^-, X_1^+, X_1^-, ..., X_I^+, X_I^- for the given q and N.
/// The negative side stops short of -q/2 so that each residue has exactly one
/// representative; x = e^{i-1} q/N lies in X_{i-1}.
std::vector<DyadicSet> dyadic_partition(const Modulus& q, std::int64_t n);

enum class BilinearMethod { naive, transformed, fast };

/// Largest M * N * phi(q) accepted by the naive path.
inline constexpr double kNaiveWorkCap = 1e9;

/// S_q(A; J) = sum_m sum_{n in J} alpha_m K_q(m, n).
///   naive:       direct double sum over kloosterman()
///   transformed: sum_{x unit} (sum_m alpha_m e_q(m x^{-1})) gamma_x
///   fast:        inner sums for every x from one length-q DFT of the weights
SumResult bilinear_kloosterman(const WeightVector& a, const Interval& j, BilinearMethod method);

/// Transformed-path contribution of the unit members of one dyadic set.
SumResult bilinear_kloosterman_partial(const WeightVector& a, const Interval& j, const DyadicSet& set);

/// T_q(W; J) = sum_chi sum_{n in J} omega_chi G_q(chi, n).
///   naive:       direct double sum over gauss()
///   transformed: sum_{x unit} (sum_chi omega_chi chi(x)) gamma_x
/// The fast method is not defined for this family (invalid_input).
SumResult bilinear_gauss(const CharWeightVector& w, const Interval& j, BilinearMethod method);

/// S_{k,q}(A; J) = sum_m sum_{n in J} alpha_m sum_{x unit} e_q(m x^{-k} + n x),
/// evaluated as sum_{x unit} (sum_m alpha_m e_q(m (x^{-1})^k)) gamma_x.
SumResult bilinear_generalized(const WeightVector& a, const Interval& j, int k);

struct MomentResult {
  double lhs = 0.0;
  double rhs = 0.0;
};

enum class MomentMethod { automatic, exhaustive, convolution };

/// Cap on the number of 2r-tuples enumerated by the exhaustive path.
inline constexpr double kMomentTupleCap = 1e8;

/// lhs = sum_{m in Z_q} |sum_{x in X} gamma_x e_q(m x^{-1})|^{2r}
/// rhs = q * Re sum over 2r-tuples of X with
///         x_1^{-1} + ... + x_r^{-1} = x_{r+1}^{-1} + ... + x_{2r}^{-1} (mod q)
///       of prod_{j <= r} gamma_{x_j} conj(gamma_{x_{r+j}}).
/// The exhaustive path enumerates all |X|^{2r} tuples; the convolution path
/// folds the distribution of r-fold inverse sums and returns q sum_s |D(s)|^2.
/// automatic uses the exhaustive path when |X|^{2r} <= kMomentTupleCap.
MomentResult moment_check(const Modulus& q, std::span<const std::int64_t> xs,
                          const std::map<std::int64_t, cplx>& gamma, int r,
                          MomentMethod method = MomentMethod::automatic);

/// Hoelder bound ||A||_1^{1-1/r} ||A||_2^{1/r} (sum_{m unit} |sum_{x in X} gamma_x e_q(m x^{-1})|^{2r})^{1/(2r)}
/// on the partial sum over the unit members X of a dyadic set.
double holder_bound(const WeightVector& a, const Interval& j, const DyadicSet& set, int r);

}  // namespace klsum
