#pragma once

// Closed-form upper bounds for the bilinear sums and the geometry of the
// region where the new bound beats the earlier ones. Every q^{o(1)} factor
// and every implied constant is set to 1.

#include <optional>
#include <string>
#include <string_view>

#include "klsum/bilinear.hpp"

namespace klsum {

enum class BoundName { trivial, fkm, bfkmm, shpzha, combined, thm21, thm22, thm23, thm24, simple21 };

std::string_view bound_name(BoundName name) noexcept;
BoundName parse_bound_name(std::string_view text);

/// A bound formula plus its parameters. r and epsilon are present exactly
/// for thm22 / thm24 (r >= 2, epsilon >= 0). honor_side_condition only
/// applies to `combined`: when set, the bfkmm term is dropped from the
/// minimum whenever MN <= p^{3/2} and M <= N^2 fails.
struct BoundSpec {
  BoundName name = BoundName::trivial;
  std::optional<int> r;
  std::optional<double> epsilon;
  bool honor_side_condition = false;

  static BoundSpec make(BoundName name, std::optional<int> r = std::nullopt,
                        std::optional<double> epsilon = std::nullopt, bool honor_side_condition = false);

  /// Column label: the formula name, or "combined_cond" for the variant that
  /// honours the bfkmm side condition.
  std::string label() const;
};

struct BoundInputs {
  double q = 0.0;
  double m = 0.0;  // support size M
  double n = 0.0;  // interval length N
  Norms norms;
  /// max |kernel| for the trivial bound (max |K_q| or sqrt q for Gauss sums).
  std::optional<double> kernel_max;
};

struct BoundEvaluation {
  double value = 0.0;
  /// MN <= p^{3/2} and M <= N^2, reported for bfkmm and combined.
  std::optional<bool> side_condition;
};

BoundEvaluation bound_value(const BoundSpec& spec, const BoundInputs& in);

enum class Region { interior, boundary, outside };

std::string_view region_name(Region r) noexcept;

/// Absolute slack under which an inequality counts as an equality.
inline constexpr double kRegionTolerance = 1e-12;

/// Classifies (mu, nu) = (log M / log q, log N / log q) against
///   2mu + 7nu >= 4,  2mu + 11nu >= 6,  1 + mu >= 2nu,  3nu >= 2mu >= nu
/// together with the edge mu <= 1 of the unit square.
Region improvement_region(double mu, double nu);

}  // namespace klsum
