#include "klsum/bilinear.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "klsum/dft.hpp"
#include "klsum/error.hpp"

namespace klsum {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_modulus(const Modulus& a, const Modulus& b, const char* what) {
  if (!(a == b)) {
    throw_error(ErrorKind::modulus_mismatch, std::string(what) + ": moduli differ (" +
                                                 std::to_string(a.value()) + " vs " +
                                                 std::to_string(b.value()) + ")");
  }
}

template <typename Entries>
Norms norms_of(const Entries& entries) {
  Norms n;
  double sq = 0.0;
  for (const auto& [key, w] : entries) {
    const double a = std::abs(w);
    n.l1 += a;
    sq += a * a;
    n.linf = std::max(n.linf, a);
  }
  n.l2 = std::sqrt(sq);
  return n;
}

template <typename Entries>
std::int64_t nonzero_count(const Entries& entries) {
  std::int64_t c = 0;
  for (const auto& [key, w] : entries) c += (w != cplx{0.0, 0.0}) ? 1 : 0;
  return c;
}

struct GammaValue {
  cplx value;
  double error;
};

GammaValue gamma_with_error(const Interval& j, std::int64_t x) {
  const std::int64_t q = j.modulus().value();
  const std::int64_t r = reduce(x, q);
  if (r == 0) {
    throw_error(ErrorKind::domain_restriction, "gamma_sum: x must be nonzero modulo q");
  }
  const std::int64_t two_q = 2 * q;
  const std::int64_t shift = reduce(2 * j.offset() + j.length() + 1, two_q);
  const cplx phase = eq_exp(mul_mod(shift, r, two_q), two_q);
  const double num = eq_exp(mul_mod(j.length(), r, two_q), two_q).imag();
  const double den = eq_exp(r, two_q).imag();
  const double ratio = num / den;
  return {phase * ratio, 4.0 * kEps * (std::abs(ratio) + 1.0 / std::fabs(den))};
}

bool all_zero(const std::map<std::int64_t, cplx>& entries) {
  for (const auto& [m, w] : entries) {
    if (w != cplx{0.0, 0.0}) return false;
  }
  return true;
}

}  // namespace

WeightVector::WeightVector(Modulus q, const std::map<std::int64_t, cplx>& entries) : q_(std::move(q)) {
  for (const auto& [m, w] : entries) set(m, w);
}

void WeightVector::set(std::int64_t m, cplx weight) {
  const std::int64_t r = reduce(m, q_.value());
  if (const auto g = std::gcd(r, q_.value()); g != 1) {
    throw_error(ErrorKind::invalid_weight, "weight key " + std::to_string(m) + " is not a unit modulo " +
                                               std::to_string(q_.value()) + " (gcd " + std::to_string(g) + ")");
  }
  entries_[r] = weight;
}

cplx WeightVector::at(std::int64_t m) const {
  const auto it = entries_.find(reduce(m, q_.value()));
  return it == entries_.end() ? cplx{0.0, 0.0} : it->second;
}

std::int64_t WeightVector::support_size() const noexcept { return nonzero_count(entries_); }

Norms WeightVector::norms() const noexcept { return norms_of(entries_); }

std::vector<cplx> WeightVector::dense() const {
  std::vector<cplx> out(static_cast<std::size_t>(q_.value()), {0.0, 0.0});
  for (const auto& [m, w] : entries_) out[static_cast<std::size_t>(m)] = w;
  return out;
}

WeightVector WeightVector::operator+(const WeightVector& other) const {
  require_same_modulus(q_, other.q_, "WeightVector::operator+");
  WeightVector out = *this;
  for (const auto& [m, w] : other.entries_) out.entries_[m] += w;
  return out;
}

WeightVector WeightVector::scaled(cplx c) const {
  WeightVector out = *this;
  for (auto& [m, w] : out.entries_) w *= c;
  return out;
}

Interval::Interval(Modulus q, std::int64_t offset, std::int64_t length)
    : q_(std::move(q)), offset_(offset), length_(length) {
  if (offset_ < 0 || length_ < 1 || offset_ + length_ > q_.value() - 1) {
    throw_error(ErrorKind::invalid_input, "interval {" + std::to_string(offset_ + 1) + ", ..., " +
                                              std::to_string(offset_ + length_) + "} does not fit in [1, " +
                                              std::to_string(q_.value() - 1) + "]");
  }
}

void CharWeightVector::set(const DirichletCharacter& chi, cplx weight) {
  require_same_modulus(q_, chi.modulus(), "CharWeightVector::set");
  if (!chi.is_primitive()) {
    throw_error(ErrorKind::invalid_weight, "character weight keys must be primitive (conductor " +
                                               std::to_string(chi.conductor()) + " != " +
                                               std::to_string(q_.value()) + ")");
  }
  entries_.insert_or_assign(chi, weight);
}

std::int64_t CharWeightVector::support_size() const noexcept { return nonzero_count(entries_); }

Norms CharWeightVector::norms() const noexcept { return norms_of(entries_); }

cplx gamma_sum(const Interval& j, std::int64_t x) { return gamma_with_error(j, x).value; }

std::vector<cplx> gamma_table(const Interval& j) {
  const std::int64_t q = j.modulus().value();
  std::vector<cplx> out(static_cast<std::size_t>(q));
  out[0] = cplx(static_cast<double>(j.length()), 0.0);
  for (std::int64_t x = 1; x < q; ++x) out[static_cast<std::size_t>(x)] = gamma_sum(j, x);
  return out;
}

int dyadic_depth(std::int64_t n) {
  if (n <= 2) return 0;
  return static_cast<int>(std::ceil(std::log(static_cast<long double>(n) / 2.0L)));
}

std::vector<DyadicSet> dyadic_partition(const Modulus& q, std::int64_t n) {
  const std::int64_t qq = q.value();
  if (n < 1 || n > qq - 1) {
    throw_error(ErrorKind::invalid_input, "dyadic_partition: N must lie in [1, q-1], got " + std::to_string(n));
  }
  const int depth = dyadic_depth(n);
  std::vector<DyadicSet> sets;
  sets.reserve(static_cast<std::size_t>(2 * (depth + 1)));
  for (int i = 0; i <= depth; ++i) {
    sets.push_back({i, Sign::plus, {}});
    sets.push_back({i, Sign::minus, {}});
  }
  const auto qn = static_cast<long double>(qq);
  for (std::int64_t a = 1; 2 * a <= qq; ++a) {
    int i = 0;
    if (static_cast<int128>(a) * n > qq) {
      // smallest i >= 1 with a <= e^i q / N
      i = 1;
      const long double scaled = static_cast<long double>(a) * static_cast<long double>(n);
      while (i < depth && scaled > std::exp(static_cast<long double>(i)) * qn) ++i;
    }
    sets[static_cast<std::size_t>(2 * i)].members.push_back(a);
    if (2 * a < qq) sets[static_cast<std::size_t>(2 * i + 1)].members.push_back(-a);
  }
  return sets;
}

namespace {

// Shared transformed-path loop: sum over units x (in visiting order) of
// inner(x) * gamma_x, with inner(x) = sum_m alpha_m e_q(m * key(x)).
template <typename Units, typename Key>
SumResult transformed_sum(const WeightVector& a, const Interval& j, const Units& units, Key key) {
  const Modulus& q = a.modulus();
  const std::int64_t qq = q.value();
  const auto roots = q.roots();
  ErrorTrackedSum total;
  for (std::int64_t x : units) {
    const std::int64_t y = key(x);
    ErrorTrackedSum inner;
    for (const auto& [m, w] : a.entries()) inner.add(w * roots[static_cast<std::size_t>(mul_mod(m, y, qq))]);
    const SumResult in = inner.result();
    const GammaValue g = gamma_with_error(j, x);
    total.add(in.value * g.value, in.error_bound * std::abs(g.value) + std::abs(in.value) * g.error);
  }
  return total.result();
}

}  // namespace

SumResult bilinear_kloosterman(const WeightVector& a, const Interval& j, BilinearMethod method) {
  require_same_modulus(a.modulus(), j.modulus(), "bilinear_kloosterman");
  if (all_zero(a.entries())) return {};
  const Modulus& q = a.modulus();
  const auto inv = q.inverses();

  switch (method) {
    case BilinearMethod::naive: {
      const double work = static_cast<double>(a.entries().size()) * static_cast<double>(j.length()) *
                          static_cast<double>(q.phi());
      if (work > kNaiveWorkCap) {
        throw_error(ErrorKind::resource_limit, "bilinear_kloosterman: naive work M*N*phi(q) = " +
                                                   std::to_string(work) + " exceeds cap");
      }
      ErrorTrackedSum total;
      for (const auto& [m, w] : a.entries()) {
        for (std::int64_t n = j.first(); n <= j.last(); ++n) {
          const SumResult k = kloosterman(q, m, n);
          total.add(w * k.value, std::abs(w) * k.error_bound);
        }
      }
      return total.result();
    }
    case BilinearMethod::transformed:
      return transformed_sum(a, j, q.units(), [&](std::int64_t x) { return inv[static_cast<std::size_t>(x)]; });
    case BilinearMethod::fast: {
      std::vector<cplx> inner = a.dense();
      const Dft dft(inner.size());
      dft.transform(inner);
      const double inner_err = dft.error_bound(a.norms().l2);
      ErrorTrackedSum total;
      for (auto x : q.units()) {
        const cplx s = inner[static_cast<std::size_t>(inv[static_cast<std::size_t>(x)])];
        const GammaValue g = gamma_with_error(j, x);
        total.add(s * g.value, inner_err * std::abs(g.value) + std::abs(s) * g.error);
      }
      return total.result();
    }
  }
  throw_error(ErrorKind::invalid_input, "bilinear_kloosterman: unknown method");
}

SumResult bilinear_kloosterman_partial(const WeightVector& a, const Interval& j, const DyadicSet& set) {
  require_same_modulus(a.modulus(), j.modulus(), "bilinear_kloosterman_partial");
  const Modulus& q = a.modulus();
  const std::int64_t qq = q.value();
  std::vector<std::int64_t> residues;
  for (auto x : set.members) {
    if (q.is_unit(x)) residues.push_back(reduce(x, qq));
  }
  const auto inv = q.inverses();
  return transformed_sum(a, j, residues, [&](std::int64_t x) { return inv[static_cast<std::size_t>(x)]; });
}

SumResult bilinear_gauss(const CharWeightVector& w, const Interval& j, BilinearMethod method) {
  require_same_modulus(w.modulus(), j.modulus(), "bilinear_gauss");
  const Modulus& q = w.modulus();
  bool empty = true;
  for (const auto& [chi, omega] : w.entries()) empty = empty && omega == cplx{0.0, 0.0};
  if (empty) return {};

  switch (method) {
    case BilinearMethod::naive: {
      ErrorTrackedSum total;
      for (const auto& [chi, omega] : w.entries()) {
        const auto values = chi.values();
        for (std::int64_t n = j.first(); n <= j.last(); ++n) {
          const SumResult g = gauss(q, values, n);
          total.add(omega * g.value, std::abs(omega) * g.error_bound);
        }
      }
      return total.result();
    }
    case BilinearMethod::transformed: {
      std::vector<ErrorTrackedSum> inner(static_cast<std::size_t>(q.value()));
      for (const auto& [chi, omega] : w.entries()) {
        const auto values = chi.values();
        for (auto x : q.units()) inner[static_cast<std::size_t>(x)].add(omega * values[static_cast<std::size_t>(x)]);
      }
      ErrorTrackedSum total;
      for (auto x : q.units()) {
        const SumResult in = inner[static_cast<std::size_t>(x)].result();
        const GammaValue g = gamma_with_error(j, x);
        total.add(in.value * g.value, in.error_bound * std::abs(g.value) + std::abs(in.value) * g.error);
      }
      return total.result();
    }
    case BilinearMethod::fast:
      break;
  }
  throw_error(ErrorKind::invalid_input, "bilinear_gauss: only the naive and transformed methods exist");
}

SumResult bilinear_generalized(const WeightVector& a, const Interval& j, int k) {
  if (k < 1) throw_error(ErrorKind::invalid_input, "bilinear_generalized: k must be >= 1, got " + std::to_string(k));
  require_same_modulus(a.modulus(), j.modulus(), "bilinear_generalized");
  if (all_zero(a.entries())) return {};
  const Modulus& q = a.modulus();
  const auto inv = q.inverses();
  return transformed_sum(a, j, q.units(), [&](std::int64_t x) {
    return pow_mod(inv[static_cast<std::size_t>(x)], static_cast<std::uint64_t>(k), q.value());
  });
}

MomentResult moment_check(const Modulus& q, std::span<const std::int64_t> xs,
                          const std::map<std::int64_t, cplx>& gamma, int r, MomentMethod method) {
  if (r < 1) throw_error(ErrorKind::invalid_input, "moment_check: r must be >= 1");
  const std::int64_t qq = q.value();
  const auto inv_table = q.inverses();
  std::vector<std::int64_t> inv(xs.size());
  std::vector<cplx> g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!q.is_unit(xs[i])) throw NotAUnit(xs[i], qq, std::gcd(reduce(xs[i], qq), qq));
    const auto it = gamma.find(xs[i]);
    if (it == gamma.end()) {
      throw_error(ErrorKind::invalid_input, "moment_check: no gamma value for x = " + std::to_string(xs[i]));
    }
    inv[i] = inv_table[static_cast<std::size_t>(reduce(xs[i], qq))];
    g[i] = it->second;
  }

  const double tuples = std::pow(static_cast<double>(xs.size()), 2.0 * r);
  if (method == MomentMethod::automatic) {
    method = tuples <= kMomentTupleCap ? MomentMethod::exhaustive : MomentMethod::convolution;
  }
  if (method == MomentMethod::exhaustive && tuples > kMomentTupleCap) {
    throw_error(ErrorKind::resource_limit,
                "moment_check: |X|^{2r} = " + std::to_string(tuples) + " exceeds the exhaustive cap");
  }

  MomentResult out;
  const auto roots = q.roots();
  for (std::int64_t m = 0; m < qq; ++m) {
    cplx v{0.0, 0.0};
    for (std::size_t i = 0; i < xs.size(); ++i) v += g[i] * roots[static_cast<std::size_t>(mul_mod(m, inv[i], qq))];
    out.lhs += std::pow(std::norm(v), r);
  }
  if (xs.empty()) return out;

  if (method == MomentMethod::exhaustive) {
    // All r-tuples with their inverse sum and gamma product; then every
    // (left, right) pair of r-tuples is one 2r-tuple.
    std::vector<std::int64_t> sums{0};
    std::vector<cplx> prods{cplx{1.0, 0.0}};
    for (int step = 0; step < r; ++step) {
      std::vector<std::int64_t> next_sums;
      std::vector<cplx> next_prods;
      next_sums.reserve(sums.size() * xs.size());
      next_prods.reserve(sums.size() * xs.size());
      for (std::size_t t = 0; t < sums.size(); ++t) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
          next_sums.push_back((sums[t] + inv[i]) % qq);
          next_prods.push_back(prods[t] * g[i]);
        }
      }
      sums = std::move(next_sums);
      prods = std::move(next_prods);
    }
    cplx acc{0.0, 0.0};
    for (std::size_t left = 0; left < sums.size(); ++left) {
      for (std::size_t right = 0; right < sums.size(); ++right) {
        if (sums[left] == sums[right]) acc += prods[left] * std::conj(prods[right]);
      }
    }
    out.rhs = static_cast<double>(qq) * acc.real();
    return out;
  }

  std::vector<cplx> dist(static_cast<std::size_t>(qq), {0.0, 0.0});
  for (std::size_t i = 0; i < xs.size(); ++i) dist[static_cast<std::size_t>(inv[i])] += g[i];
  for (int step = 1; step < r; ++step) {
    std::vector<cplx> next(static_cast<std::size_t>(qq), {0.0, 0.0});
    for (std::int64_t s = 0; s < qq; ++s) {
      const cplx d = dist[static_cast<std::size_t>(s)];
      if (d == cplx{0.0, 0.0}) continue;
      for (std::size_t i = 0; i < xs.size(); ++i) next[static_cast<std::size_t>((s + inv[i]) % qq)] += d * g[i];
    }
    dist = std::move(next);
  }
  double acc = 0.0;
  for (const auto& d : dist) acc += std::norm(d);
  out.rhs = static_cast<double>(qq) * acc;
  return out;
}

double holder_bound(const WeightVector& a, const Interval& j, const DyadicSet& set, int r) {
  if (r < 1) throw_error(ErrorKind::invalid_input, "holder_bound: r must be >= 1");
  require_same_modulus(a.modulus(), j.modulus(), "holder_bound");
  const Modulus& q = a.modulus();
  const std::int64_t qq = q.value();
  const auto inv = q.inverses();
  const auto roots = q.roots();
  std::vector<std::int64_t> keys;
  std::vector<cplx> g;
  for (auto x : set.members) {
    if (!q.is_unit(x)) continue;
    const std::int64_t rx = reduce(x, qq);
    keys.push_back(inv[static_cast<std::size_t>(rx)]);
    g.push_back(gamma_sum(j, rx));
  }
  double moment = 0.0;
  for (auto m : q.units()) {
    cplx v{0.0, 0.0};
    for (std::size_t i = 0; i < keys.size(); ++i) v += g[i] * roots[static_cast<std::size_t>(mul_mod(m, keys[i], qq))];
    moment += std::pow(std::norm(v), r);
  }
  const Norms nm = a.norms();
  const double rr = static_cast<double>(r);
  return std::pow(nm.l1, 1.0 - 1.0 / rr) * std::pow(nm.l2, 1.0 / rr) * std::pow(moment, 1.0 / (2.0 * rr));
}

}  // namespace klsum
