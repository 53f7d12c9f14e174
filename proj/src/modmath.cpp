#include "klsum/modmath.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

#include "klsum/error.hpp"

namespace klsum {

std::vector<PrimePower> factorize(std::int64_t n) {
  if (n < 2) {
    throw_error(ErrorKind::invalid_input, "factorize: n must be >= 2, got " + std::to_string(n));
  }
  std::vector<PrimePower> out;
  auto take = [&](std::int64_t p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  take(2);
  take(3);
  for (std::int64_t p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exponent, std::int64_t q) noexcept {
  std::int64_t result = 1 % q;
  base = reduce(base, q);
  while (exponent != 0) {
    if (exponent & 1U) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exponent >>= 1U;
  }
  return result;
}

namespace {

// Returns (g, s) with g = gcd(a, q) and a*s == g (mod q).
std::pair<std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t q) {
  std::int64_t old_r = reduce(a, q), r = q;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
  }
  return {old_r, reduce(old_s, q)};
}

bool has_full_order(std::int64_t g, std::int64_t order, const std::vector<PrimePower>& order_factors,
                    std::int64_t m) {
  if (pow_mod(g, static_cast<std::uint64_t>(order), m) != 1) return false;
  for (const auto& f : order_factors) {
    if (pow_mod(g, static_cast<std::uint64_t>(order / f.prime), m) == 1) return false;
  }
  return true;
}

UnitComponent make_component(const PrimePower& pp) {
  UnitComponent c;
  c.prime = pp.prime;
  c.exponent = pp.exponent;
  c.modulus_part = 1;
  for (int i = 0; i < pp.exponent; ++i) c.modulus_part *= pp.prime;

  if (pp.prime == 2) {
    if (pp.exponent == 2) {
      c.generators = {3};
      c.orders = {2};
    } else if (pp.exponent >= 3) {
      // Z_{2^e}^* = <-1> x <3>; powers of 3 are 1 or 3 mod 8, so -1 is not among them.
      c.generators = {c.modulus_part - 1, 3};
      c.orders = {2, c.modulus_part / 4};
    }
    return c;
  }

  const std::int64_t order = c.modulus_part / pp.prime * (pp.prime - 1);
  std::vector<PrimePower> order_factors;
  if (order >= 2) order_factors = factorize(order);
  for (std::int64_t g = 2; g < c.modulus_part; ++g) {
    if (g % pp.prime == 0) continue;
    if (has_full_order(g, order, order_factors, c.modulus_part)) {
      c.generators = {g};
      c.orders = {order};
      return c;
    }
  }
  // p = 2 handled above; for odd p^e a primitive root always exists.
  throw_error(ErrorKind::invalid_input, "no primitive root found modulo " +
                                            std::to_string(c.modulus_part));
}

}  // namespace

UnitGroupStructure::UnitGroupStructure(std::int64_t q, std::vector<UnitComponent> components)
    : q_(q), components_(std::move(components)) {
  for (const auto& c : components_) {
    for (auto o : c.orders) {
      orders_.push_back(o);
      exponent_ = std::lcm(exponent_, o);
    }
  }
  log_tables_.reserve(components_.size());
  for (const auto& c : components_) {
    std::vector<std::int64_t> table(static_cast<std::size_t>(c.modulus_part), -1);
    if (c.generators.empty()) {
      table[1 % c.modulus_part] = 0;
    } else if (c.generators.size() == 1) {
      std::int64_t v = 1;
      for (std::int64_t k = 0; k < c.orders[0]; ++k) {
        table[static_cast<std::size_t>(v)] = k;
        v = mul_mod(v, c.generators[0], c.modulus_part);
      }
    } else {
      std::int64_t lead = 1;
      for (std::int64_t a = 0; a < c.orders[0]; ++a) {
        std::int64_t v = lead;
        for (std::int64_t b = 0; b < c.orders[1]; ++b) {
          table[static_cast<std::size_t>(v)] = a * c.orders[1] + b;
          v = mul_mod(v, c.generators[1], c.modulus_part);
        }
        lead = mul_mod(lead, c.generators[0], c.modulus_part);
      }
    }
    log_tables_.push_back(std::move(table));
  }
}

std::vector<std::int64_t> UnitGroupStructure::discrete_log(std::int64_t x) const {
  std::vector<std::int64_t> out(orders_.size());
  discrete_log_into(x, out);
  return out;
}

void UnitGroupStructure::component_log(std::size_t component, std::int64_t r,
                                       std::span<std::int64_t> out) const {
  const auto& c = components_.at(component);
  const std::int64_t packed = log_tables_[component][static_cast<std::size_t>(reduce(r, c.modulus_part))];
  if (packed < 0) throw NotAUnit(r, c.modulus_part, c.prime);
  if (c.generators.size() == 2) {
    out[0] = packed / c.orders[1];
    out[1] = packed % c.orders[1];
  } else if (c.generators.size() == 1) {
    out[0] = packed;
  }
}

void UnitGroupStructure::discrete_log_into(std::int64_t x, std::span<std::int64_t> out) const {
  const std::int64_t r = reduce(x, q_);
  if (const auto g = std::gcd(r, q_); g != 1) throw NotAUnit(x, q_, g);
  std::size_t k = 0;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    const std::size_t len = components_[i].generators.size();
    component_log(i, r, out.subspan(k, len));
    k += len;
  }
}

std::int64_t UnitGroupStructure::from_exponents(std::span<const std::int64_t> exponents) const {
  if (exponents.size() != orders_.size()) {
    throw_error(ErrorKind::invalid_input, "exponent tuple has wrong length");
  }
  // CRT accumulation: x mod m, combined with each component in turn.
  std::int64_t x = 0, m = 1;
  std::size_t k = 0;
  for (const auto& c : components_) {
    std::int64_t v = 1 % c.modulus_part;
    for (std::size_t j = 0; j < c.generators.size(); ++j, ++k) {
      v = mul_mod(v, pow_mod(c.generators[j], static_cast<std::uint64_t>(reduce(exponents[k], c.orders[j])),
                             c.modulus_part),
                  c.modulus_part);
    }
    // x' = x + m * t with t = (v - x) * m^{-1} mod modulus_part
    const std::int64_t t = mul_mod(reduce(v - x, c.modulus_part),
                                   ext_gcd(m % c.modulus_part, c.modulus_part).second, c.modulus_part);
    x += m * t;
    m *= c.modulus_part;
  }
  return reduce(x, q_);
}

struct Modulus::State {
  std::int64_t q = 0;
  std::int64_t phi = 0;
  std::vector<PrimePower> factors;

  std::once_flag group_once, inverses_once, roots_once, units_once;
  UnitGroupStructure group;
  std::vector<std::int64_t> inverses;
  std::vector<cplx> roots;
  std::vector<std::int64_t> units;
};

Modulus::Modulus(std::int64_t q) : q_(q), phi_(0), prime_(false), state_(std::make_shared<State>()) {
  if (q < 2 || q > kMaxModulus) {
    throw_error(ErrorKind::invalid_input,
                "modulus must lie in [2, " + std::to_string(kMaxModulus) + "], got " + std::to_string(q));
  }
  state_->q = q;
  state_->factors = factorize(q);
  std::int64_t phi = q;
  for (const auto& f : state_->factors) phi = phi / f.prime * (f.prime - 1);
  state_->phi = phi;
  phi_ = phi;
  prime_ = state_->factors.size() == 1 && state_->factors.front().exponent == 1;
}

const std::vector<PrimePower>& Modulus::factors() const noexcept { return state_->factors; }

bool Modulus::is_unit(std::int64_t x) const noexcept { return std::gcd(reduce(x, value()), value()) == 1; }

const UnitGroupStructure& Modulus::unit_group() const {
  std::call_once(state_->group_once, [s = state_.get()] {
    std::vector<UnitComponent> comps;
    comps.reserve(s->factors.size());
    for (const auto& f : s->factors) comps.push_back(make_component(f));
    s->group = UnitGroupStructure(s->q, std::move(comps));
  });
  return state_->group;
}

std::span<const std::int64_t> Modulus::inverses() const {
  std::call_once(state_->inverses_once, [s = state_.get()] {
    s->inverses.assign(static_cast<std::size_t>(s->q), 0);
    for (std::int64_t x = 1; x < s->q; ++x) {
      auto [g, inv] = ext_gcd(x, s->q);
      if (g == 1) s->inverses[static_cast<std::size_t>(x)] = inv;
    }
  });
  return state_->inverses;
}

std::span<const cplx> Modulus::roots() const {
  std::call_once(state_->roots_once, [s = state_.get()] {
    s->roots.resize(static_cast<std::size_t>(s->q));
    for (std::int64_t r = 0; r < s->q; ++r) s->roots[static_cast<std::size_t>(r)] = eq_exp(r, s->q);
  });
  return state_->roots;
}

std::span<const std::int64_t> Modulus::units() const {
  std::call_once(state_->units_once, [s = state_.get()] {
    s->units.reserve(static_cast<std::size_t>(s->phi));
    for (std::int64_t x = 1; x < s->q; ++x) {
      if (std::gcd(x, s->q) == 1) s->units.push_back(x);
    }
  });
  return state_->units;
}

std::int64_t mod_inv(std::int64_t x, std::int64_t q) {
  if (q < 2) throw_error(ErrorKind::invalid_input, "mod_inv: modulus must be >= 2");
  auto [g, inv] = ext_gcd(x, q);
  if (g != 1) throw NotAUnit(x, q, g);
  return inv;
}

std::int64_t mod_inv(std::int64_t x, const Modulus& q) { return mod_inv(x, q.value()); }

cplx eq_exp(std::int64_t z, std::int64_t q) noexcept {
  const std::int64_t r = reduce(z, q);
  // r/q = k/4 + s/(4q) with k in {0,1,2,3}, s in [0, q)
  const int128 four_r = static_cast<int128>(r) * 4;
  const int k = static_cast<int>(four_r / q);
  const auto s = static_cast<std::int64_t>(four_r - static_cast<int128>(k) * q);

  constexpr double half_pi = std::numbers::pi / 2;
  double c, sn;
  if (2 * s == q) {
    c = sn = std::numbers::sqrt2 / 2;
  } else if (2 * s < q) {
    const double t = half_pi * (static_cast<double>(s) / static_cast<double>(q));
    c = std::cos(t);
    sn = std::sin(t);
  } else {
    const double t = half_pi * (static_cast<double>(q - s) / static_cast<double>(q));
    c = std::sin(t);
    sn = std::cos(t);
  }
  switch (k) {
    case 0: return {c, sn};
    case 1: return {-sn, c};
    case 2: return {-c, -sn};
    default: return {sn, -c};
  }
}

std::int64_t dist_q(std::int64_t u, std::int64_t q) noexcept {
  const std::int64_t r = reduce(u, q);
  return std::min(r, q - r);
}

std::int64_t centered(std::int64_t u, std::int64_t q) noexcept {
  const std::int64_t r = reduce(u, q);
  return 2 * r > q ? r - q : r;
}

}  // namespace klsum
