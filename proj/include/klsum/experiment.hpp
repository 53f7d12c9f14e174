#pragma once

// Experiment runner: evaluates one bilinear sum with seeded weights and
// compares it with every applicable bound; sweeps over q in [Q, 2Q] for the
// average theorems.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "klsum/bilinear.hpp"
#include "klsum/bounds.hpp"
#include "klsum/weights.hpp"

namespace klsum {

enum class Family { kloosterman, gauss };

std::string_view family_name(Family f) noexcept;
Family parse_family(std::string_view text);

std::string_view method_name(BilinearMethod m) noexcept;
BilinearMethod parse_method(std::string_view text);

struct ExperimentRecord {
  std::int64_t q = 0;
  std::int64_t M = 0;
  std::int64_t N = 0;
  std::int64_t L = 0;
  std::uint64_t seed = 0;
  std::string weight_kind;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double norm_inf = 0.0;
  double abs_sum = 0.0;
  double error_bound = 0.0;
  std::string bound_name;
  double bound_value = 0.0;
  double ratio = 0.0;
  double wall_time_seconds = 0.0;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

struct ExperimentParams {
  std::int64_t q = 0;
  std::int64_t M = 0;  // support size: first M units, or first M primitive characters
  std::int64_t N = 1;
  std::int64_t L = 0;
  WeightKind weights = WeightKind::pm1;
  std::uint64_t seed = 0;
  Family family = Family::kloosterman;
  /// Evaluation paths; the first one supplies abs_sum and error_bound, the
  /// others are cross-checked against it. Empty means the family default
  /// (transformed + fast for Kloosterman, transformed for Gauss).
  std::vector<BilinearMethod> methods;
  /// When both are set, the average-theorem bound (thm22 or thm24) is added.
  std::optional<int> r;
  std::optional<double> epsilon;
};

/// The evaluated sum together with the weight data the bounds need.
struct SumEvaluation {
  std::int64_t support = 0;  // requested support size M
  Norms norms;
  SumResult sum;
  double seconds = 0.0;
};

/// Generates the weights and evaluates the sum by every requested method.
/// Two methods disagreeing by more than their combined error bounds raise
/// path_disagreement.
SumEvaluation evaluate_sum(const ExperimentParams& params);

/// The bounds reported by run_experiment for these parameters.
std::vector<BoundSpec> applicable_bounds(const ExperimentParams& params);

/// One record per applicable bound, sorted by bound_name.
std::vector<ExperimentRecord> run_experiment(const ExperimentParams& params);

struct SweepResult {
  std::vector<ExperimentRecord> records;  // one per q, ascending
  std::int64_t exceptional_count = 0;     // #{q : ratio > 1}
  double exceptional_fraction = 0.0;      // exceptional_count / (Q + 1)
  double normalized_count = 0.0;          // exceptional_count / Q^{1 - 2 r eps}
  double reference_fraction = 0.0;        // Q^{-2 r eps}
  /// Gauss family only: number of characters enumerated for each q.
  std::map<std::int64_t, std::int64_t> characters_per_q;
};

/// For each q in [Q, 2Q]: full support (all units or all primitive
/// characters), J = [1, N], weights from (seed, q), ratio against thm22 or
/// thm24. Runs the moduli in parallel; the output order is by q.
SweepResult average_sweep(std::int64_t big_q, std::int64_t n, int r, double epsilon, WeightKind weights,
                          std::uint64_t seed, Family family);

}  // namespace klsum
