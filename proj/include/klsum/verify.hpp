#pragma once

// Self-checks over whole ranges of moduli. Each check returns a named
// pass/fail result with a one-line summary; the command-line `verify`
// subcommand and the acceptance test both run them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace klsum {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// K_p(mn, 1) = K_p(m, n) for every prime p <= max_prime and units m, n.
CheckResult check_kloosterman_identity(std::int64_t max_prime = 101, double tolerance = 1e-9);

/// |K_p(m, n)| <= 2 sqrt(p) for primes p <= max_prime and units m, n, using DFT rows.
CheckResult check_weil_bound(std::int64_t max_prime = 499, double tolerance = 1e-6);

/// |G_q(chi, n)| = sqrt(q) for every primitive chi and unit n, q <= max_q.
CheckResult check_gauss_modulus(std::int64_t max_q = 200, double tolerance = 1e-8);

/// naive / transformed / fast agreement on random instances with q <= max_q,
/// plus the closed form S = p - 1 for full constant weights and J = [1, p-1].
CheckResult check_path_equivalence(int instances = 200, std::int64_t max_q = 2000, std::uint64_t seed = 1);

/// Moment identity for every q <= max_q, every unit set |X| <= max_set and
/// r <= max_r, plus `random_instances` larger random cases.
CheckResult check_moment_identity(std::int64_t max_q = 31, int max_set = 4, int max_r = 2, int random_instances = 20,
                                  double rel_tolerance = 1e-6, std::uint64_t seed = 2);

/// Convolution and exhaustive congruence counts agree for q <= max_q,
/// K <= max_k, r <= max_r and both kinds.
CheckResult check_counting_equivalence(std::int64_t max_q = 50, std::int64_t max_k = 12, int max_r = 2);

/// The gamma bound, exactness of the dyadic partition and reassembly of the
/// transformed sum from its dyadic pieces, for q <= max_q.
CheckResult check_gamma_and_dyadic(std::int64_t max_q = 500, std::uint64_t seed = 3);

/// Polygon vertices, the interior point (1/2, 1/2) and random points built to
/// violate one inequality.
CheckResult check_region(int outside_points = 1000, std::uint64_t seed = 4);

struct RatioRegression {
  double max_thm21_ratio = 0.0;
  std::int64_t argmax_q = 0;
  std::uint64_t argmax_seed = 0;
  std::int64_t instances = 0;
  std::int64_t trivial_violations = 0;
};

/// Primes in [min_prime, max_prime], M = N = ceil(sqrt q), +-1 weights,
/// seeds 1..seeds: the largest thm21 ratio and the trivial-bound count.
RatioRegression ratio_regression(std::int64_t min_prime = 101, std::int64_t max_prime = 2003, int seeds = 5);

/// Passes when the trivial bound always holds and, if a baseline is given,
/// the largest thm21 ratio stays below it.
CheckResult check_ratio_regression(std::optional<double> baseline, std::int64_t min_prime = 101,
                                   std::int64_t max_prime = 2003, int seeds = 5);

/// Runs the average sweep and recomputes every q on its own; passes when the
/// values match exactly and the sweep finishes within the time limit.
CheckResult check_average_sweep(std::int64_t big_q = 256, std::int64_t n = 16, int r = 2, double epsilon = 0.1,
                                double time_limit_seconds = 300.0, std::uint64_t seed = 1);

struct SuiteOptions {
  bool quick = false;  // smaller ranges, for interactive use
  std::optional<double> ratio_baseline;
};

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options = {});

}  // namespace klsum
