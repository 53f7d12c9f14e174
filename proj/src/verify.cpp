#include "klsum/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "klsum/bilinear.hpp"
#include "klsum/bounds.hpp"
#include "klsum/counting.hpp"
#include "klsum/error.hpp"
#include "klsum/experiment.hpp"
#include "klsum/expsums.hpp"
#include "klsum/parallel.hpp"
#include "klsum/weights.hpp"

namespace klsum {

namespace {

// Runs body, which fills in passed/detail; an exception fails the check.
CheckResult timed(std::string name, const std::function<void(CheckResult&)>& body) {
  CheckResult out;
  out.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail = std::string("exception: ") + e.what();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<std::int64_t> primes_in(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = std::max<std::int64_t>(lo, 2); p <= hi; ++p) {
    if (Modulus(p).is_prime()) out.push_back(p);
  }
  return out;
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::int64_t ceil_sqrt(std::int64_t n) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s < n) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= n) --s;
  return s;
}

bool agree(const SumResult& a, const SumResult& b) {
  return std::abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-9;
}

// Calls visit on every subset of `items` with 1..max_size elements.
void for_each_subset(const std::vector<std::int64_t>& items, int max_size,
                     const std::function<void(const std::vector<std::int64_t>&)>& visit) {
  std::vector<std::int64_t> current;
  auto walk = [&](auto&& self, std::size_t start) -> void {
    if (!current.empty()) visit(current);
    if (static_cast<int>(current.size()) == max_size) return;
    for (std::size_t i = start; i < items.size(); ++i) {
      current.push_back(items[i]);
      self(self, i + 1);
      current.pop_back();
    }
  };
  walk(walk, 0);
}

double relative_gap(const MomentResult& m) {
  const double scale = std::max({std::abs(m.lhs), std::abs(m.rhs), 1e-300});
  return std::abs(m.lhs - m.rhs) / scale;
}

}  // namespace

CheckResult check_kloosterman_identity(std::int64_t max_prime, double tolerance) {
  return timed("kloosterman identity", [&](CheckResult& out) {
    double worst = 0.0;
    std::int64_t pairs = 0;
    for (auto p : primes_in(2, max_prime)) {
      const Modulus q(p);
      std::vector<cplx> row(static_cast<std::size_t>(p));
      for (std::int64_t k = 0; k < p; ++k) row[static_cast<std::size_t>(k)] = kloosterman(q, k, 1).value;
      for (std::int64_t m = 1; m < p; ++m) {
        for (std::int64_t n = 1; n < p; ++n) {
          const cplx direct = kloosterman(q, m, n).value;
          worst = std::max(worst, std::abs(direct - row[static_cast<std::size_t>(mul_mod(m, n, p))]));
          ++pairs;
        }
      }
    }
    out.passed = worst <= tolerance;
    out.detail = fmt("primes <= %lld, %lld pairs, max deviation %.3e (tolerance %.0e)",
                     static_cast<long long>(max_prime), static_cast<long long>(pairs), worst, tolerance);
  });
}

CheckResult check_weil_bound(std::int64_t max_prime, double tolerance) {
  return timed("weil bound", [&](CheckResult& out) {
    double worst_excess = -1e300, worst_ratio = 0.0;
    std::int64_t values = 0;
    for (auto p : primes_in(2, max_prime)) {
      const Modulus q(p);
      const double limit = 2.0 * std::sqrt(static_cast<double>(p));
      for (std::int64_t n = 1; n < p; ++n) {
        const auto row = kloosterman_row(q, n, RowMethod::fft);
        for (std::int64_t m = 1; m < p; ++m) {
          const double a = std::abs(row[static_cast<std::size_t>(m)]);
          worst_excess = std::max(worst_excess, a - limit);
          worst_ratio = std::max(worst_ratio, a / limit);
          ++values;
        }
      }
    }
    out.passed = worst_excess <= tolerance;
    out.detail = fmt("primes <= %lld, %lld values, max |K|/(2 sqrt p) = %.12f", static_cast<long long>(max_prime),
                     static_cast<long long>(values), worst_ratio);
  });
}

CheckResult check_gauss_modulus(std::int64_t max_q, double tolerance) {
  return timed("gauss modulus", [&](CheckResult& out) {
    double worst = 0.0;
    std::int64_t chars = 0, values = 0;
    for (std::int64_t qq = 2; qq <= max_q; ++qq) {
      const Modulus q(qq);
      const double root = std::sqrt(static_cast<double>(qq));
      for (const auto& chi : primitive_characters(q)) {
        ++chars;
        const auto table = chi.values();
        for (auto n : q.units()) {
          worst = std::max(worst, std::abs(std::abs(gauss(q, table, n).value) - root));
          ++values;
        }
      }
    }
    out.passed = worst <= tolerance;
    out.detail = fmt("q <= %lld, %lld primitive characters, %lld values, max ||G| - sqrt q| = %.3e",
                     static_cast<long long>(max_q), static_cast<long long>(chars), static_cast<long long>(values),
                     worst);
  });
}

CheckResult check_path_equivalence(int instances, std::int64_t max_q, std::uint64_t seed) {
  return timed("path equivalence", [&](CheckResult& out) {
    constexpr double kNaiveBudget = 2e6;  // M * N * phi for the naive path here
    std::mt19937_64 rng(seed);
    int failures = 0, with_naive = 0;
    constexpr std::array<WeightKind, 3> kinds{WeightKind::constant, WeightKind::pm1, WeightKind::unit};
    for (int i = 0; i < instances; ++i) {
      const Modulus q(uniform(rng, 3, max_q));
      const std::int64_t qq = q.value();
      // Every other instance is kept small enough for the naive path.
      const bool small = i % 2 == 0;
      const std::int64_t n = uniform(rng, 1, small ? std::min<std::int64_t>(20, qq - 1) : qq - 1);
      const std::int64_t l = uniform(rng, 0, qq - 1 - n);
      const std::int64_t m = uniform(rng, 1, small ? std::min<std::int64_t>(20, q.phi()) : q.phi());
      const auto a = make_weights(q, m, kinds[static_cast<std::size_t>(uniform(rng, 0, 2))], rng());
      const Interval j(q, l, n);
      const auto t = bilinear_kloosterman(a, j, BilinearMethod::transformed);
      const auto f = bilinear_kloosterman(a, j, BilinearMethod::fast);
      bool ok = agree(t, f);
      if (static_cast<double>(m) * static_cast<double>(n) * static_cast<double>(q.phi()) <= kNaiveBudget) {
        ++with_naive;
        const auto nv = bilinear_kloosterman(a, j, BilinearMethod::naive);
        ok = ok && agree(nv, t) && agree(nv, f);
      }
      failures += ok ? 0 : 1;
    }
    int closed_failures = 0;
    for (std::int64_t p : {3, 5, 7, 11, 101, 1009}) {
      const Modulus q(p);
      const auto a = make_weights(q, p - 1, WeightKind::constant, 0);
      const Interval j(q, 0, p - 1);
      const SumResult expect{cplx(static_cast<double>(p - 1), 0.0), 0.0, 0};
      for (auto method : {BilinearMethod::naive, BilinearMethod::transformed, BilinearMethod::fast}) {
        if (method == BilinearMethod::naive && p > 101) continue;
        closed_failures += agree(bilinear_kloosterman(a, j, method), expect) ? 0 : 1;
      }
    }
    out.passed = failures == 0 && closed_failures == 0;
    out.detail = fmt("%d instances (q <= %lld, %d with naive), %d disagreements; closed form S = p - 1: %d failures",
                     instances, static_cast<long long>(max_q), with_naive, failures, closed_failures);
  });
}

CheckResult check_moment_identity(std::int64_t max_q, int max_set, int max_r, int random_instances,
                                  double rel_tolerance, std::uint64_t seed) {
  return timed("moment identity", [&](CheckResult& out) {
    double worst = 0.0;
    std::int64_t cases = 0;
    for (std::int64_t qq = 2; qq <= max_q; ++qq) {
      const Modulus q(qq);
      const Interval j(q, 0, std::max<std::int64_t>(1, (qq - 1) / 2));
      const auto table = gamma_table(j);
      const std::vector<std::int64_t> units(q.units().begin(), q.units().end());
      for_each_subset(units, max_set, [&](const std::vector<std::int64_t>& xs) {
        std::map<std::int64_t, cplx> gamma;
        for (auto x : xs) gamma[x] = table[static_cast<std::size_t>(x)];
        for (int r = 1; r <= max_r; ++r) {
          const auto ex = moment_check(q, xs, gamma, r, MomentMethod::exhaustive);
          const auto conv = moment_check(q, xs, gamma, r, MomentMethod::convolution);
          worst = std::max({worst, relative_gap(ex), relative_gap(conv)});
          ++cases;
        }
      });
    }
    std::mt19937_64 rng(seed);
    for (int i = 0; i < random_instances; ++i) {
      const Modulus q(uniform(rng, max_q + 1, 2000));
      const auto units = q.units();
      const int size = static_cast<int>(std::min<std::int64_t>(uniform(rng, 5, 40), q.phi()));
      std::vector<std::int64_t> xs(units.begin(), units.end());
      std::shuffle(xs.begin(), xs.end(), rng);
      xs.resize(static_cast<std::size_t>(size));
      const Interval j(q, uniform(rng, 0, q.value() / 2), uniform(rng, 1, q.value() / 2 - 1));
      std::map<std::int64_t, cplx> gamma;
      for (auto x : xs) gamma[x] = gamma_sum(j, x);
      const int r = static_cast<int>(uniform(rng, 1, 3));
      worst = std::max(worst, relative_gap(moment_check(q, xs, gamma, r)));
      ++cases;
    }
    out.passed = worst <= rel_tolerance;
    out.detail = fmt("%lld cases (q <= %lld, |X| <= %d, r <= %d, plus %d random), max relative gap %.3e",
                     static_cast<long long>(cases), static_cast<long long>(max_q), max_set, max_r, random_instances,
                     worst);
  });
}

CheckResult check_counting_equivalence(std::int64_t max_q, std::int64_t max_k, int max_r) {
  return timed("counting equivalence", [&](CheckResult& out) {
    std::int64_t cases = 0, mismatches = 0;
    for (std::int64_t qq = 2; qq <= max_q; ++qq) {
      const Modulus q(qq);
      for (std::int64_t k = 1; k <= std::min(max_k, qq); ++k) {
        for (int r = 1; r <= max_r; ++r) {
          for (auto kind : {CountKind::reciprocal, CountKind::product}) {
            const auto conv = congruence_count(q, k, r, kind, CountMethod::convolution);
            const auto ex = congruence_count(q, k, r, kind, CountMethod::exhaustive);
            mismatches += conv == ex ? 0 : 1;
            ++cases;
          }
        }
      }
    }
    const bool spots = jr_congruence(Modulus(5), 2, 2) == 6 && rr_congruence(Modulus(5), 2, 2) == 6 &&
                       jr_equation(3, 2) == 15;
    out.passed = mismatches == 0 && spots;
    out.detail = fmt("%lld cases (q <= %lld, K <= %lld, r <= %d), %lld mismatches; spot values %s",
                     static_cast<long long>(cases), static_cast<long long>(max_q), static_cast<long long>(max_k),
                     max_r, static_cast<long long>(mismatches), spots ? "ok" : "wrong");
  });
}

CheckResult check_gamma_and_dyadic(std::int64_t max_q, std::uint64_t seed) {
  return timed("gamma and dyadic", [&](CheckResult& out) {
    std::mt19937_64 rng(seed);
    std::int64_t gamma_violations = 0, partition_errors = 0, reassembly_errors = 0, gamma_values = 0;
    for (std::int64_t qq = 2; qq <= max_q; ++qq) {
      const Modulus q(qq);
      auto check_interval = [&](const Interval& j) {
        const auto table = gamma_table(j);
        const double nn = static_cast<double>(j.length());
        for (std::int64_t x = 1; x < qq; ++x) {
          const double limit = std::min(nn, static_cast<double>(qq) / (2.0 * static_cast<double>(dist_q(x, qq))));
          gamma_violations += std::abs(table[static_cast<std::size_t>(x)]) <= limit * (1 + 1e-12) + 1e-9 ? 0 : 1;
          ++gamma_values;
        }
      };
      for (std::int64_t n = 1; n < qq; ++n) check_interval(Interval(q, 0, n));
      {
        const std::int64_t n = uniform(rng, 1, qq - 1);
        check_interval(Interval(q, uniform(rng, 0, qq - 1 - n), n));
      }

      std::vector<std::int64_t> lengths{1, 2, 3, 7, ceil_sqrt(qq), qq / 3, qq - 1};
      std::sort(lengths.begin(), lengths.end());
      lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
      for (auto n : lengths) {
        if (n < 1 || n > qq - 1) continue;
        const auto sets = dyadic_partition(q, n);
        if (sets.size() != static_cast<std::size_t>(2 * (dyadic_depth(n) + 1))) ++partition_errors;
        std::vector<int> seen(static_cast<std::size_t>(qq), 0);
        const Interval j(q, 0, n);
        for (const auto& s : sets) {
          const double cap = kGammaDecayConstant * std::exp(-static_cast<double>(s.index)) * static_cast<double>(n);
          for (auto x : s.members) {
            ++seen[static_cast<std::size_t>(reduce(x, qq))];
            if (std::abs(gamma_sum(j, x)) > cap * (1 + 1e-12) + 1e-9) ++partition_errors;
          }
        }
        partition_errors += seen[0] != 0 ? 1 : 0;
        for (std::int64_t x = 1; x < qq; ++x) partition_errors += seen[static_cast<std::size_t>(x)] == 1 ? 0 : 1;
      }

      const std::int64_t n = lengths[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(lengths.size()) - 1))];
      if (n >= 1 && n <= qq - 1) {
        const Interval j(q, uniform(rng, 0, qq - 1 - n), n);
        const auto a = make_weights(q, std::min<std::int64_t>(q.phi(), 20), WeightKind::unit, rng());
        const auto full = bilinear_kloosterman(a, j, BilinearMethod::transformed);
        ErrorTrackedSum pieces;
        for (const auto& s : dyadic_partition(q, n)) {
          const auto part = bilinear_kloosterman_partial(a, j, s);
          pieces.add(part.value, part.error_bound);
        }
        const auto whole = pieces.result();
        reassembly_errors += agree(whole, full) ? 0 : 1;
      }
    }
    out.passed = gamma_violations == 0 && partition_errors == 0 && reassembly_errors == 0;
    out.detail = fmt("q <= %lld: %lld gamma values, %lld bound violations, %lld partition errors, %lld reassembly errors",
                     static_cast<long long>(max_q), static_cast<long long>(gamma_values),
                     static_cast<long long>(gamma_violations), static_cast<long long>(partition_errors),
                     static_cast<long long>(reassembly_errors));
  });
}

CheckResult check_region(int outside_points, std::uint64_t seed) {
  return timed("region geometry", [&](CheckResult& out) {
    const std::array<std::pair<double, double>, 5> vertices{
        {{1.0 / 4, 1.0 / 2}, {1.0 / 3, 2.0 / 3}, {1.0, 1.0}, {1.0, 2.0 / 3}, {9.0 / 14, 3.0 / 7}}};
    int vertex_failures = 0;
    for (auto [mu, nu] : vertices) vertex_failures += improvement_region(mu, nu) == Region::boundary ? 0 : 1;
    const bool centre = improvement_region(0.5, 0.5) == Region::interior;

    // lhs - rhs of each defining inequality
    const std::array<std::function<double(double, double)>, 5> slack{
        [](double m, double n) { return 2 * m + 7 * n - 4; }, [](double m, double n) { return 2 * m + 11 * n - 6; },
        [](double m, double n) { return 1 + m - 2 * n; },     [](double m, double n) { return 3 * n - 2 * m; },
        [](double m, double n) { return 2 * m - n; },
    };
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int misclassified = 0;
    for (int i = 0; i < outside_points; ++i) {
      const auto& violated = slack[static_cast<std::size_t>(i) % slack.size()];
      double mu = 0.0, nu = 0.0;
      do {
        mu = unit(rng);
        nu = unit(rng);
      } while (violated(mu, nu) > -1e-6);
      misclassified += improvement_region(mu, nu) == Region::outside ? 0 : 1;
    }
    out.passed = vertex_failures == 0 && centre && misclassified == 0;
    out.detail = fmt("vertices: %d misclassified; (1/2, 1/2) %s; %d of %d violating points not outside",
                     vertex_failures, centre ? "interior" : "not interior", misclassified, outside_points);
  });
}

RatioRegression ratio_regression(std::int64_t min_prime, std::int64_t max_prime, int seeds) {
  const auto primes = primes_in(min_prime, max_prime);
  struct Slot {
    double ratio = 0.0;
    std::uint64_t seed = 0;
    std::int64_t violations = 0;
  };
  std::vector<Slot> slots(primes.size());
  parallel_for(primes.size(), [&](std::size_t i) {
    const std::int64_t p = primes[i];
    for (int s = 1; s <= seeds; ++s) {
      ExperimentParams params;
      params.q = p;
      params.M = params.N = ceil_sqrt(p);
      params.weights = WeightKind::pm1;
      params.seed = static_cast<std::uint64_t>(s);
      for (const auto& rec : run_experiment(params)) {
        if (rec.bound_name == "thm21" && rec.ratio > slots[i].ratio) {
          slots[i].ratio = rec.ratio;
          slots[i].seed = params.seed;
        }
        if (rec.bound_name == "trivial" && rec.abs_sum - rec.error_bound > rec.bound_value) ++slots[i].violations;
      }
    }
  });
  RatioRegression out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    out.instances += seeds;
    out.trivial_violations += slots[i].violations;
    if (slots[i].ratio > out.max_thm21_ratio) {
      out.max_thm21_ratio = slots[i].ratio;
      out.argmax_q = primes[i];
      out.argmax_seed = slots[i].seed;
    }
  }
  return out;
}

CheckResult check_ratio_regression(std::optional<double> baseline, std::int64_t min_prime, std::int64_t max_prime,
                                   int seeds) {
  return timed("thm21 ratio regression", [&](CheckResult& out) {
    const auto reg = ratio_regression(min_prime, max_prime, seeds);
    out.passed = reg.trivial_violations == 0 && (!baseline || reg.max_thm21_ratio < *baseline);
    out.detail = fmt("%lld instances, max thm21 ratio %.9g (q = %lld, seed %llu)", static_cast<long long>(reg.instances),
                     reg.max_thm21_ratio, static_cast<long long>(reg.argmax_q),
                     static_cast<unsigned long long>(reg.argmax_seed));
    out.detail += baseline ? fmt(", baseline %.9g", *baseline) : std::string(", no baseline");
    out.detail += fmt(", trivial bound violations %lld", static_cast<long long>(reg.trivial_violations));
  });
}

CheckResult check_average_sweep(std::int64_t big_q, std::int64_t n, int r, double epsilon, double time_limit_seconds,
                                std::uint64_t seed) {
  return timed("average sweep", [&](CheckResult& out) {
    const auto start = std::chrono::steady_clock::now();
    const auto sweep = average_sweep(big_q, n, r, epsilon, WeightKind::pm1, seed, Family::kloosterman);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::int64_t mismatches = 0;
    for (const auto& rec : sweep.records) {
      ExperimentParams p;
      p.q = rec.q;
      p.M = Modulus(rec.q).phi();
      p.N = n;
      p.weights = WeightKind::pm1;
      p.seed = seed;
      p.r = r;
      p.epsilon = epsilon;
      bool found = false;
      for (const auto& single : run_experiment(p)) {
        if (single.bound_name != rec.bound_name) continue;
        found = true;
        const bool same = single.abs_sum == rec.abs_sum && single.bound_value == rec.bound_value &&
                          single.ratio == rec.ratio && single.norm1 == rec.norm1 && single.norm2 == rec.norm2 &&
                          single.error_bound == rec.error_bound;
        mismatches += same ? 0 : 1;
      }
      mismatches += found ? 0 : 1;
    }
    const bool complete = sweep.records.size() == static_cast<std::size_t>(big_q + 1);
    out.passed = complete && mismatches == 0 && elapsed <= time_limit_seconds;
    out.detail = fmt("Q = %lld: %zu moduli in %.2f s, %lld recomputation mismatches; exceptional %lld "
                     "(fraction %.4g vs Q^{-2r eps} = %.4g)",
                     static_cast<long long>(big_q), sweep.records.size(), elapsed, static_cast<long long>(mismatches),
                     static_cast<long long>(sweep.exceptional_count), sweep.exceptional_fraction,
                     sweep.reference_fraction);
  });
}

std::vector<CheckResult> run_invariant_suite(const SuiteOptions& options) {
  std::vector<CheckResult> out;
  if (options.quick) {
    out.push_back(check_kloosterman_identity(31));
    out.push_back(check_weil_bound(101));
    out.push_back(check_gauss_modulus(60));
    out.push_back(check_path_equivalence(40, 500));
    out.push_back(check_moment_identity(13, 3, 2, 5));
    out.push_back(check_counting_equivalence(20, 6, 2));
    out.push_back(check_gamma_and_dyadic(100));
    out.push_back(check_region(1000));
    out.push_back(check_ratio_regression(options.ratio_baseline, 101, 401, 2));
    out.push_back(check_average_sweep(64, 8, 2, 0.1));
    return out;
  }
  out.push_back(check_kloosterman_identity());
  out.push_back(check_weil_bound());
  out.push_back(check_gauss_modulus());
  out.push_back(check_path_equivalence());
  out.push_back(check_moment_identity());
  out.push_back(check_counting_equivalence());
  out.push_back(check_gamma_and_dyadic());
  out.push_back(check_region());
  out.push_back(check_ratio_regression(options.ratio_baseline));
  out.push_back(check_average_sweep());
  return out;
}

}  // namespace klsum
