#include "klsum/expsums.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "klsum/dft.hpp"
#include "klsum/error.hpp"

namespace klsum {

namespace {

// Smallest f with the component character trivial on {x = 1 mod p^f}.
int component_conductor_exponent(const UnitGroupStructure& group, std::size_t index,
                                 std::span<const std::int64_t> exps) {
  const auto& c = group.components()[index];
  bool trivial = true;
  for (auto a : exps) trivial = trivial && a == 0;
  if (trivial) return 0;

  if (c.prime != 2) {
    // chi(g) = e(a / phi(p^e)); trivial on the subgroup of order p^{e-f} iff p^{e-f} | a.
    std::int64_t a = exps[0];
    int v = 0;
    while (a % c.prime == 0 && v < c.exponent - 1) {
      a /= c.prime;
      ++v;
    }
    return c.exponent - v;
  }

  std::int64_t local_exp = 1;
  for (auto o : c.orders) local_exp = std::lcm(local_exp, o);
  std::vector<std::int64_t> logs(c.generators.size());
  auto is_trivial_at = [&](std::int64_t x) {
    group.component_log(index, x, logs);
    std::int64_t phase = 0;
    for (std::size_t j = 0; j < logs.size(); ++j) {
      phase = (phase + mul_mod(exps[j] * (local_exp / c.orders[j]), logs[j], local_exp)) % local_exp;
    }
    return phase == 0;
  };
  std::int64_t step = 1;
  for (int f = 0; f <= c.exponent; ++f, step *= 2) {
    bool kernel = true;
    for (std::int64_t x = 1; x < c.modulus_part && kernel; x += step) {
      if (x % 2 == 1) kernel = is_trivial_at(x);
    }
    if (kernel) return f;
  }
  return c.exponent;
}

}  // namespace

DirichletCharacter::DirichletCharacter(Modulus q, std::vector<std::int64_t> exponents)
    : q_(std::move(q)), exponents_(std::move(exponents)) {
  const auto& group = q_.unit_group();
  const auto& orders = group.orders();
  if (exponents_.size() != orders.size()) {
    throw_error(ErrorKind::invalid_input, "character exponent tuple has length " +
                                              std::to_string(exponents_.size()) + ", expected " +
                                              std::to_string(orders.size()));
  }
  const std::int64_t big_l = group.exponent();
  scaled_.resize(orders.size());
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (exponents_[j] < 0 || exponents_[j] >= orders[j]) {
      throw_error(ErrorKind::invalid_input, "character exponent out of range");
    }
    scaled_[j] = exponents_[j] * (big_l / orders[j]);
    order_ = std::lcm(order_, orders[j] / std::gcd(orders[j], exponents_[j]));
  }

  conductor_ = 1;
  std::size_t k = 0;
  for (std::size_t i = 0; i < group.components().size(); ++i) {
    const auto& c = group.components()[i];
    const std::size_t len = c.generators.size();
    const int f = component_conductor_exponent(group, i, std::span(exponents_).subspan(k, len));
    for (int t = 0; t < f; ++t) conductor_ *= c.prime;
    k += len;
  }
}

bool DirichletCharacter::is_principal() const noexcept {
  for (auto a : exponents_) {
    if (a != 0) return false;
  }
  return true;
}

std::int64_t DirichletCharacter::phase(std::int64_t x) const {
  if (!q_.is_unit(x)) return -1;
  const auto& group = q_.unit_group();
  const std::int64_t big_l = group.exponent();
  // rank <= 1 + number of distinct primes of q, far below the buffer size
  std::array<std::int64_t, 32> buf{};
  const std::span<std::int64_t> logs(buf.data(), scaled_.size());
  group.discrete_log_into(x, logs);
  std::int64_t phase = 0;
  for (std::size_t j = 0; j < scaled_.size(); ++j) {
    phase = (phase + mul_mod(scaled_[j], logs[j], big_l)) % big_l;
  }
  return phase;
}

cplx DirichletCharacter::operator()(std::int64_t x) const {
  const std::int64_t p = phase(x);
  if (p < 0) return {0.0, 0.0};
  return eq_exp(p, q_.unit_group().exponent());
}

std::vector<cplx> DirichletCharacter::values() const {
  const std::int64_t q = q_.value();
  const std::int64_t big_l = q_.unit_group().exponent();
  std::vector<cplx> out(static_cast<std::size_t>(q), {0.0, 0.0});
  for (auto x : q_.units()) out[static_cast<std::size_t>(x)] = eq_exp(phase(x), big_l);
  return out;
}

DirichletCharacter DirichletCharacter::conj() const {
  const auto& orders = q_.unit_group().orders();
  std::vector<std::int64_t> neg(exponents_.size());
  for (std::size_t j = 0; j < neg.size(); ++j) neg[j] = reduce(-exponents_[j], orders[j]);
  return DirichletCharacter(q_, std::move(neg));
}

CharacterRange::CharacterRange(Modulus q) : q_(std::move(q)), orders_(q_.unit_group().orders()) {
  count_ = 1;
  for (auto o : orders_) count_ *= static_cast<std::size_t>(o);
}

DirichletCharacter CharacterRange::at(std::size_t index) const {
  if (index >= count_) throw_error(ErrorKind::invalid_input, "character index out of range");
  std::vector<std::int64_t> exps(orders_.size());
  for (std::size_t j = orders_.size(); j-- > 0;) {
    const auto o = static_cast<std::size_t>(orders_[j]);
    exps[j] = static_cast<std::int64_t>(index % o);
    index /= o;
  }
  return DirichletCharacter(q_, std::move(exps));
}

std::vector<DirichletCharacter> primitive_characters(const Modulus& q) {
  std::vector<DirichletCharacter> out;
  for (auto chi : characters(q)) {
    if (chi.is_primitive()) out.push_back(std::move(chi));
  }
  return out;
}

SumResult kloosterman(const Modulus& q, std::int64_t m, std::int64_t n) {
  const std::int64_t qq = q.value();
  const std::int64_t mm = reduce(m, qq), nn = reduce(n, qq);
  const auto inv = q.inverses();
  const auto roots = q.roots();
  ErrorTrackedSum sum;
  for (auto x : q.units()) {
    const std::int64_t arg = (mul_mod(mm, x, qq) + mul_mod(nn, inv[static_cast<std::size_t>(x)], qq)) % qq;
    sum.add(roots[static_cast<std::size_t>(arg)]);
  }
  return sum.result();
}

std::vector<cplx> kloosterman_row(const Modulus& q, std::int64_t n, RowMethod method) {
  const std::int64_t qq = q.value();
  if (method == RowMethod::automatic) method = qq > kRowFftThreshold ? RowMethod::fft : RowMethod::direct;

  std::vector<cplx> row(static_cast<std::size_t>(qq));
  if (method == RowMethod::direct) {
    for (std::int64_t m = 0; m < qq; ++m) row[static_cast<std::size_t>(m)] = kloosterman(q, m, n).value;
    return row;
  }
  const std::int64_t nn = reduce(n, qq);
  const auto inv = q.inverses();
  const auto roots = q.roots();
  for (auto x : q.units()) {
    row[static_cast<std::size_t>(x)] = roots[static_cast<std::size_t>(mul_mod(nn, inv[static_cast<std::size_t>(x)], qq))];
  }
  Dft(static_cast<std::size_t>(qq)).transform(row);
  return row;
}

double kloosterman_row_error_bound(const Modulus& q) {
  return Dft(static_cast<std::size_t>(q.value())).error_bound(std::sqrt(static_cast<double>(q.phi())));
}

double kloosterman_max_abs(const Modulus& q, std::int64_t first_n, std::int64_t last_n) {
  if (last_n < first_n) throw_error(ErrorKind::invalid_input, "kloosterman_max_abs: empty n range");
  double best = 0.0;
  auto scan = [&](std::int64_t n) {
    for (const auto& v : kloosterman_row(q, n)) best = std::max(best, std::abs(v));
  };
  if (q.is_prime()) {
    bool unit_row_done = false;
    for (std::int64_t n = first_n; n <= last_n; ++n) {
      if (!q.is_unit(n)) {
        scan(n);
      } else if (!unit_row_done) {
        scan(n);
        unit_row_done = true;
      }
    }
    return best;
  }
  for (std::int64_t n = first_n; n <= last_n; ++n) scan(n);
  return best;
}

SumResult gauss(const Modulus& q, std::span<const cplx> chi_values, std::int64_t n) {
  const std::int64_t qq = q.value();
  if (chi_values.size() != static_cast<std::size_t>(qq)) {
    throw_error(ErrorKind::invalid_input, "gauss: character table has wrong length");
  }
  const std::int64_t nn = reduce(n, qq);
  const auto roots = q.roots();
  ErrorTrackedSum sum;
  std::int64_t arg = 0;  // n*x mod q, stepped along x
  for (std::int64_t x = 1; x < qq; ++x) {
    arg += nn;
    if (arg >= qq) arg -= qq;
    const cplx c = chi_values[static_cast<std::size_t>(x)];
    if (c != cplx{0.0, 0.0}) sum.add(c * roots[static_cast<std::size_t>(arg)]);
  }
  return sum.result();
}

SumResult gauss(const Modulus& q, const DirichletCharacter& chi, std::int64_t n) {
  if (!(chi.modulus() == q)) throw_error(ErrorKind::modulus_mismatch, "gauss: character modulus differs");
  return gauss(q, chi.values(), n);
}

cplx gauss_twisted(const Modulus& q, const DirichletCharacter& chi, std::int64_t n) {
  return std::conj(chi(n)) * gauss(q, chi, 1).value;
}

double weil_ratio(const Modulus& q, std::int64_t m, std::int64_t n) {
  if (!q.is_prime()) {
    throw_error(ErrorKind::domain_restriction,
                "weil_ratio: the 2 sqrt(q) bound is only asserted for prime q, got q = " + std::to_string(q.value()));
  }
  if (!q.is_unit(m) || !q.is_unit(n)) {
    throw_error(ErrorKind::domain_restriction, "weil_ratio: m and n must be units modulo q");
  }
  return std::abs(kloosterman(q, m, n).value) / (2.0 * std::sqrt(static_cast<double>(q.value())));
}

}  // namespace klsum
