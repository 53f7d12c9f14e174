#include "klsum/counting.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "klsum/error.hpp"
#include "klsum/parallel.hpp"

namespace klsum {

namespace {

void check_args(const Modulus& q, std::int64_t k, int r) {
  if (k < 1 || k > q.value()) {
    throw_error(ErrorKind::invalid_input, "K must lie in [1, q], got K = " + std::to_string(k) +
                                              ", q = " + std::to_string(q.value()));
  }
  if (r < 1) throw_error(ErrorKind::invalid_input, "r must be >= 1, got " + std::to_string(r));
}

// Refuses configurations whose total tuple count (base^{2r}) overflows 64 bits.
void check_no_overflow(std::int64_t base, int r) {
  if (static_cast<long double>(2 * r) * std::log2(static_cast<long double>(std::max<std::int64_t>(base, 1))) >= 63.9L) {
    throw_error(ErrorKind::resource_limit, "count would overflow 64 bits: base " + std::to_string(base) +
                                               ", r = " + std::to_string(r));
  }
}

// Element contributed by a base value x to the fold: x^{-1} or x.
std::vector<std::int64_t> fold_keys(const Modulus& q, const std::vector<std::int64_t>& base, CountKind kind) {
  std::vector<std::int64_t> keys(base.size());
  const auto inv = q.inverses();
  for (std::size_t i = 0; i < base.size(); ++i) {
    keys[i] = kind == CountKind::reciprocal ? inv[static_cast<std::size_t>(base[i])] : base[i];
  }
  return keys;
}

std::uint64_t exhaustive_count(const Modulus& q, const std::vector<std::int64_t>& keys, int r, CountKind kind) {
  const std::int64_t qq = q.value();
  const std::int64_t identity = kind == CountKind::reciprocal ? 0 : 1 % qq;
  auto combine = [&](std::int64_t acc, std::int64_t key) {
    return kind == CountKind::reciprocal ? (acc + key) % qq : mul_mod(acc, key, qq);
  };
  std::uint64_t count = 0;
  // Depth-first over all 2r positions; left holds the first half's value.
  auto walk = [&](auto&& self, int pos, std::int64_t left, std::int64_t right) -> void {
    if (pos == 2 * r) {
      count += left == right ? 1U : 0U;
      return;
    }
    for (auto key : keys) {
      if (pos < r) {
        self(self, pos + 1, combine(left, key), right);
      } else {
        self(self, pos + 1, left, combine(right, key));
      }
    }
  };
  walk(walk, 0, identity, identity);
  return count;
}

}  // namespace

std::vector<std::int64_t> admissible_base(const Modulus& q, std::int64_t k) {
  std::vector<std::int64_t> base;
  for (std::int64_t x = 1; x <= k; ++x) {
    if (std::gcd(x, q.value()) == 1) base.push_back(x);
  }
  return base;
}

CountTable::CountTable(const Modulus& q, std::int64_t k, int depth, CountKind kind) : q_(q), depth_(depth) {
  check_args(q, k, depth);
  if (q.value() > kConvolutionMaxModulus || depth > kConvolutionMaxDepth) {
    throw_error(ErrorKind::resource_limit, "convolution counting is limited to q <= " +
                                               std::to_string(kConvolutionMaxModulus) + " and r <= " +
                                               std::to_string(kConvolutionMaxDepth));
  }
  const auto base = admissible_base(q, k);
  base_size_ = static_cast<std::int64_t>(base.size());
  check_no_overflow(base_size_, depth);
  const auto keys = fold_keys(q, base, kind);
  const std::int64_t qq = q.value();

  counts_.assign(static_cast<std::size_t>(qq), 0);
  for (auto key : keys) ++counts_[static_cast<std::size_t>(key)];
  for (int step = 1; step < depth; ++step) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(qq), 0);
    for (std::int64_t s = 0; s < qq; ++s) {
      const std::uint64_t c = counts_[static_cast<std::size_t>(s)];
      if (c == 0) continue;
      for (auto key : keys) {
        const std::int64_t t = kind == CountKind::reciprocal ? (s + key) % qq : mul_mod(s, key, qq);
        next[static_cast<std::size_t>(t)] += c;
      }
    }
    counts_ = std::move(next);
  }
}

std::uint64_t CountTable::total() const noexcept {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t CountTable::collisions() const noexcept {
  std::uint64_t sum = 0;
  for (auto c : counts_) sum += c * c;
  return sum;
}

std::uint64_t congruence_count(const Modulus& q, std::int64_t k, int r, CountKind kind, CountMethod method) {
  check_args(q, k, r);
  if (method == CountMethod::convolution) return CountTable(q, k, r, kind).collisions();

  const auto base = admissible_base(q, k);
  const double tuples = std::pow(static_cast<double>(base.size()), 2.0 * r);
  if (tuples > kExhaustiveTupleCap) {
    throw_error(ErrorKind::resource_limit, "exhaustive count over " + std::to_string(tuples) +
                                               " tuples exceeds the cap");
  }
  return exhaustive_count(q, fold_keys(q, base, kind), r, kind);
}

namespace {

void check_equation_args(std::int64_t k, int r) {
  if (k < 1 || r < 1) throw_error(ErrorKind::invalid_input, "K and r must be >= 1");
  if (std::pow(static_cast<double>(k), r) > kEquationTupleCap) {
    throw_error(ErrorKind::resource_limit, "K^r exceeds the equation-count cap");
  }
}

struct FractionHash {
  std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& f) const noexcept {
    return std::hash<std::uint64_t>{}(f.first * 0x9E3779B97F4A7C15ULL ^ f.second);
  }
};

}  // namespace

std::uint64_t jr_equation(std::int64_t k, int r) {
  check_equation_args(k, r);
  using Fraction = std::pair<std::uint64_t, std::uint64_t>;
  std::unordered_map<Fraction, std::uint64_t, FractionHash> multiplicity;
  auto walk = [&](auto&& self, int depth, std::uint64_t num, std::uint64_t den) -> void {
    if (depth == r) {
      ++multiplicity[{num, den}];
      return;
    }
    for (std::uint64_t x = 1; x <= static_cast<std::uint64_t>(k); ++x) {
      std::uint64_t n2 = num * x + den, d2 = den * x;
      const std::uint64_t g = std::gcd(n2, d2);
      self(self, depth + 1, n2 / g, d2 / g);
    }
  };
  walk(walk, 0, 0, 1);
  std::uint64_t sum = 0;
  for (const auto& [value, m] : multiplicity) sum += m * m;
  return sum;
}

std::uint64_t rr_equation(std::int64_t k, int r) {
  check_equation_args(k, r);
  std::unordered_map<std::uint64_t, std::uint64_t> multiplicity;
  auto walk = [&](auto&& self, int depth, std::uint64_t product) -> void {
    if (depth == r) {
      ++multiplicity[product];
      return;
    }
    for (std::uint64_t x = 1; x <= static_cast<std::uint64_t>(k); ++x) self(self, depth + 1, product * x);
  };
  walk(walk, 0, 1);
  std::uint64_t sum = 0;
  for (const auto& [value, m] : multiplicity) sum += m * m;
  return sum;
}

std::uint64_t DyadicAverage::mean_numerator() const noexcept {
  return total / std::gcd(total, static_cast<std::uint64_t>(big_q));
}

std::uint64_t DyadicAverage::mean_denominator() const noexcept {
  return static_cast<std::uint64_t>(big_q) / std::gcd(total, static_cast<std::uint64_t>(big_q));
}

DyadicAverage dyadic_average(std::int64_t big_q, std::int64_t k, int r, CountKind kind) {
  if (big_q < 2 || k < 1 || k > big_q) {
    throw_error(ErrorKind::invalid_input, "dyadic_average needs 1 <= K <= Q and Q >= 2");
  }
  const auto span = static_cast<std::size_t>(big_q + 1);
  std::vector<std::uint64_t> counts(span);
  parallel_for(span, [&](std::size_t i) {
    const Modulus q(big_q + static_cast<std::int64_t>(i));
    counts[i] = congruence_count(q, k, r, kind, CountMethod::convolution);
  });
  DyadicAverage out;
  out.big_q = big_q;
  for (std::size_t i = 0; i < span; ++i) {
    if (counts[i] > UINT64_MAX - out.total) {
      throw_error(ErrorKind::resource_limit, "dyadic_average: total overflows 64 bits");
    }
    out.total += counts[i];
    out.per_q.emplace(big_q + static_cast<std::int64_t>(i), counts[i]);
  }
  return out;
}

}  // namespace klsum
