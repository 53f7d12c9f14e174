#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "klsum/bilinear.hpp"
#include "klsum/error.hpp"
#include "klsum/weights.hpp"

using namespace klsum;

namespace {

cplx polar_root(std::int64_t z, std::int64_t q) {
  const long double t = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(reduce(z, q)) / q;
  return {static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t))};
}

std::int64_t brute_inverse(std::int64_t x, std::int64_t q) {
  x = reduce(x, q);
  for (std::int64_t y = 1; y < q; ++y) {
    if (x * y % q == 1) return y;
  }
  return 0;
}

std::int64_t brute_pow(std::int64_t b, int k, std::int64_t q) {
  std::int64_t r = 1 % q;
  for (int i = 0; i < k; ++i) r = r * b % q;
  return r;
}

// Triple sum over m, n, x with kernel e_q(m x^{-k} + n x).
cplx oracle_bilinear(const WeightVector& a, std::int64_t first, std::int64_t last, int k = 1) {
  const std::int64_t q = a.modulus().value();
  cplx s{0.0, 0.0};
  for (const auto& [m, w] : a.entries()) {
    for (std::int64_t n = first; n <= last; ++n) {
      for (std::int64_t x = 1; x < q; ++x) {
        if (std::gcd(x, q) != 1) continue;
        s += w * polar_root(m * brute_pow(brute_inverse(x, q), k, q) + n * x, q);
      }
    }
  }
  return s;
}

bool within(const SumResult& r, cplx expect, double slack = 1e-9) {
  return std::abs(r.value - expect) <= r.error_bound + slack;
}

bool agree(const SumResult& a, const SumResult& b) {
  return std::abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-9;
}

DirichletCharacter quadratic_mod5() {
  for (auto chi : characters(Modulus(5))) {
    if (chi.order() == 2) return chi;
  }
  throw std::logic_error("missing");
}

}  // namespace

TEST(WeightVectorTest, RejectsNonUnitsAndReducesKeys) {
  const Modulus q(12);
  WeightVector a(q);
  a.set(13, {2.0, 0.0});
  EXPECT_EQ(a.at(1), cplx(2.0, 0.0));
  EXPECT_EQ(a.at(-11), cplx(2.0, 0.0));
  try {
    a.set(4, {1.0, 0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_weight);
  }
}

TEST(WeightVectorTest, NormsAndArithmetic) {
  const Modulus q(7);
  WeightVector a(q, {{1, {3.0, 4.0}}, {2, {-1.0, 0.0}}, {3, {0.0, 0.0}}});
  const auto n = a.norms();
  EXPECT_DOUBLE_EQ(n.l1, 6.0);
  EXPECT_DOUBLE_EQ(n.l2, std::sqrt(26.0));
  EXPECT_DOUBLE_EQ(n.linf, 5.0);
  EXPECT_EQ(a.support_size(), 2);
  const auto b = a.scaled({0.0, 2.0});
  EXPECT_EQ(b.at(2), cplx(0.0, -2.0));
  const auto c = a + b;
  EXPECT_EQ(c.at(1), cplx(3.0, 4.0) + cplx(0.0, 2.0) * cplx(3.0, 4.0));
  const auto dense = a.dense();
  ASSERT_EQ(dense.size(), 7U);
  EXPECT_EQ(dense[1], cplx(3.0, 4.0));
  EXPECT_EQ(dense[5], cplx(0.0, 0.0));
}

TEST(IntervalTest, Validation) {
  const Modulus q(10);
  EXPECT_NO_THROW(Interval(q, 0, 9));
  EXPECT_NO_THROW(Interval(q, 8, 1));
  EXPECT_THROW(Interval(q, 0, 10), Error);
  EXPECT_THROW(Interval(q, -1, 3), Error);
  EXPECT_THROW(Interval(q, 2, 0), Error);
  const Interval j(q, 3, 4);
  EXPECT_EQ(j.first(), 4);
  EXPECT_EQ(j.last(), 7);
}

TEST(Gamma, Examples) {
  EXPECT_NEAR(std::abs(gamma_sum(Interval(Modulus(7), 0, 3), 1)),
              std::sin(3 * std::numbers::pi / 7) / std::sin(std::numbers::pi / 7), 1e-13);
  EXPECT_NEAR(std::abs(gamma_sum(Interval(Modulus(7), 0, 3), 1)), 2.2470, 1e-4);
  EXPECT_NEAR(std::abs(gamma_sum(Interval(Modulus(7), 0, 6), 1) - cplx(-1.0, 0.0)), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(gamma_sum(Interval(Modulus(10), 0, 2), 5)), 0.0, 1e-13);
  try {
    gamma_sum(Interval(Modulus(10), 0, 2), 20);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_restriction);
  }
}

TEST(Gamma, ClosedFormMatchesDirectSumAndBound) {
  for (std::int64_t q = 2; q <= 90; ++q) {
    const Modulus mod(q);
    for (std::int64_t l = 0; l < q - 1; l += 1 + q / 7) {
      for (std::int64_t n = 1; l + n <= q - 1; ++n) {
        const Interval j(mod, l, n);
        const auto table = gamma_table(j);
        EXPECT_EQ(table[0], cplx(static_cast<double>(n), 0.0));
        for (std::int64_t x = 1; x < q; ++x) {
          cplx direct{0.0, 0.0};
          for (std::int64_t t = l + 1; t <= l + n; ++t) direct += polar_root(t * x, q);
          const cplx g = gamma_sum(j, x);
          ASSERT_LE(std::abs(g - direct), 1e-12 * (1.0 + static_cast<double>(n)));
          ASSERT_EQ(table[static_cast<std::size_t>(x)], g);
          const double limit = std::min(static_cast<double>(n), q / (2.0 * static_cast<double>(dist_q(x, q))));
          ASSERT_LE(std::abs(g), limit + 1e-9);
        }
      }
    }
  }
}

TEST(Dyadic, DepthAndExamples) {
  EXPECT_EQ(dyadic_depth(1), 0);
  EXPECT_EQ(dyadic_depth(2), 0);
  EXPECT_EQ(dyadic_depth(3), 1);   // ceil(log 1.5) = 1
  EXPECT_EQ(dyadic_depth(10), 2);  // ceil(log 5) = 2

  const auto s100 = dyadic_partition(Modulus(100), 2);
  ASSERT_EQ(s100.size(), 2U);
  EXPECT_EQ(s100[0].members.size(), 50U);  // 1..50
  EXPECT_EQ(s100[1].members.size(), 49U);  // -1..-49; -50 is the same residue as 50
  EXPECT_EQ(s100[0].members.back(), 50);

  const auto s = dyadic_partition(Modulus(100), 10);
  ASSERT_EQ(s[0].index, 0);
  ASSERT_EQ(s[0].sign, Sign::plus);
  std::vector<std::int64_t> expect(10);
  std::iota(expect.begin(), expect.end(), 1);
  EXPECT_EQ(s[0].members, expect);

  std::size_t total = 0;
  for (const auto& set : dyadic_partition(Modulus(101), 10)) total += set.members.size();
  EXPECT_EQ(total, 100U);

  EXPECT_THROW(dyadic_partition(Modulus(10), 10), Error);
  EXPECT_THROW(dyadic_partition(Modulus(10), 0), Error);
}

TEST(Dyadic, MembersRespectRangesAndDecay) {
  for (std::int64_t q = 3; q <= 400; q += 3) {
    for (std::int64_t n : {std::int64_t{1}, std::int64_t{4}, q / 2, q - 1}) {
      if (n < 1 || n > q - 1) continue;
      const Interval j(Modulus(q), 0, n);
      std::vector<int> hits(static_cast<std::size_t>(q), 0);
      for (const auto& set : dyadic_partition(Modulus(q), n)) {
        for (auto x : set.members) {
          const std::int64_t a = std::abs(x);
          EXPECT_EQ(x > 0, set.sign == Sign::plus);
          EXPECT_LE(2 * a, q);
          // x lies in (e^{i-1} q/N, e^i q/N], with i = 0 meaning (0, q/N]
          const long double an = static_cast<long double>(a) * n;
          if (set.index == 0) {
            EXPECT_LE(an, static_cast<long double>(q));
          } else {
            EXPECT_GT(an, std::exp(static_cast<long double>(set.index - 1)) * q);
          }
          EXPECT_LE(std::abs(gamma_sum(j, x)), kGammaDecayConstant * std::exp(-set.index) * n + 1e-9);
          ++hits[static_cast<std::size_t>(reduce(x, q))];
        }
      }
      EXPECT_EQ(hits[0], 0);
      for (std::int64_t x = 1; x < q; ++x) EXPECT_EQ(hits[static_cast<std::size_t>(x)], 1) << q << ' ' << n << ' ' << x;
    }
  }
}

TEST(BilinearKloosterman, Examples) {
  const Modulus three(3), five(5);
  for (auto method : {BilinearMethod::naive, BilinearMethod::transformed, BilinearMethod::fast}) {
    EXPECT_TRUE(within(bilinear_kloosterman(WeightVector(three, {{1, 1.0}}), Interval(three, 0, 1), method), -1.0));
    EXPECT_TRUE(within(bilinear_kloosterman(make_weights(five, 4, WeightKind::constant, 0), Interval(five, 0, 4), method), 4.0));
    EXPECT_TRUE(within(bilinear_kloosterman(make_weights(three, 2, WeightKind::constant, 0), Interval(three, 0, 2), method), 2.0));
    const auto zero = bilinear_kloosterman(WeightVector(five), Interval(five, 1, 2), method);
    EXPECT_EQ(zero.value, cplx(0.0, 0.0));
    EXPECT_EQ(zero.error_bound, 0.0);
  }
}

TEST(BilinearKloosterman, PathsMatchTripleSumOracle) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const Modulus q(static_cast<std::int64_t>(rng() % 70) + 3);
    const std::int64_t qq = q.value();
    const std::int64_t n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(qq - 1)) + 1;
    const std::int64_t l = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(qq - n));
    const std::int64_t m = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q.phi())) + 1;
    const auto a = make_weights(q, m, WeightKind::unit, rng());
    const Interval j(q, l, n);
    const cplx expect = oracle_bilinear(a, j.first(), j.last());
    for (auto method : {BilinearMethod::naive, BilinearMethod::transformed, BilinearMethod::fast}) {
      EXPECT_TRUE(within(bilinear_kloosterman(a, j, method), expect, 1e-9 * (1 + std::abs(expect))))
          << "q=" << qq << " method=" << static_cast<int>(method);
    }
  }
}

TEST(BilinearKloosterman, LinearityAndScaling) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const Modulus q(static_cast<std::int64_t>(rng() % 1500) + 3);
    const std::int64_t n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q.value() - 1)) + 1;
    const Interval j(q, 0, n);
    const auto a = make_weights(q, std::min<std::int64_t>(q.phi(), 30), WeightKind::unit, rng());
    const auto b = make_weights(q, std::min<std::int64_t>(q.phi(), 17), WeightKind::pm1, rng());
    const cplx c{0.3, -1.7};
    for (auto method : {BilinearMethod::transformed, BilinearMethod::fast}) {
      const auto sa = bilinear_kloosterman(a, j, method), sb = bilinear_kloosterman(b, j, method);
      const auto sab = bilinear_kloosterman(a + b, j, method);
      EXPECT_LE(std::abs(sab.value - sa.value - sb.value), sa.error_bound + sb.error_bound + sab.error_bound + 1e-9);
      const auto sc = bilinear_kloosterman(a.scaled(c), j, method);
      EXPECT_LE(std::abs(sc.value - c * sa.value), sc.error_bound + std::abs(c) * sa.error_bound + 1e-9);
    }
  }
}

TEST(BilinearKloosterman, ErrorsOnMismatchAndCaps) {
  const Modulus q7(7), q11(11);
  try {
    bilinear_kloosterman(WeightVector(q7, {{1, 1.0}}), Interval(q11, 0, 2), BilinearMethod::fast);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::modulus_mismatch);
  }
  const Modulus big(200003);
  const auto a = make_weights(big, 100000, WeightKind::pm1, 1);
  try {
    bilinear_kloosterman(a, Interval(big, 0, 100000), BilinearMethod::naive);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
}

TEST(BilinearKloosterman, DyadicPiecesReassemble) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 80; ++trial) {
    const Modulus q(static_cast<std::int64_t>(rng() % 900) + 3);
    const std::int64_t n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q.value() - 1)) + 1;
    const Interval j(q, 0, n);
    const auto a = make_weights(q, std::min<std::int64_t>(q.phi(), 25), WeightKind::unit, rng());
    const auto full = bilinear_kloosterman(a, j, BilinearMethod::transformed);
    cplx total{0.0, 0.0};
    double err = 0.0;
    for (const auto& set : dyadic_partition(q, n)) {
      const auto part = bilinear_kloosterman_partial(a, j, set);
      total += part.value;
      err += part.error_bound;
      // Hoelder with r = 1, 2 dominates each piece
      for (int r : {1, 2}) EXPECT_LE(std::abs(part.value), holder_bound(a, j, set, r) * (1 + 1e-9) + part.error_bound);
    }
    EXPECT_LE(std::abs(total - full.value), err + full.error_bound + 1e-9);
  }
}

TEST(BilinearGauss, Examples) {
  const Modulus five(5);
  CharWeightVector w(five);
  w.set(quadratic_mod5(), 1.0);
  for (auto method : {BilinearMethod::naive, BilinearMethod::transformed}) {
    EXPECT_TRUE(within(bilinear_gauss(w, Interval(five, 0, 4), method), 0.0));
    EXPECT_TRUE(within(bilinear_gauss(w, Interval(five, 0, 1), method), std::sqrt(5.0)));
    EXPECT_EQ(bilinear_gauss(CharWeightVector(five), Interval(five, 0, 3), method).value, cplx(0.0, 0.0));
  }
  EXPECT_THROW(bilinear_gauss(w, Interval(five, 0, 1), BilinearMethod::fast), Error);
}

TEST(BilinearGauss, WeightValidation) {
  CharWeightVector w(Modulus(9));
  try {
    w.set(DirichletCharacter(Modulus(9), {0}), 1.0);  // principal, not primitive
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_weight);
  }
  try {
    w.set(quadratic_mod5(), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::modulus_mismatch);
  }
}

TEST(BilinearGauss, PathsMatchDirectOracle) {
  std::mt19937_64 rng(23);
  for (std::int64_t qq = 3; qq <= 60; ++qq) {
    const Modulus q(qq);
    const auto prims = primitive_characters(q);
    if (prims.empty()) continue;
    const std::int64_t n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(qq - 1)) + 1;
    const std::int64_t l = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(qq - n));
    const auto w = make_char_weights(q, static_cast<std::int64_t>(prims.size()), WeightKind::unit, rng());
    cplx expect{0.0, 0.0};
    for (const auto& [chi, omega] : w.entries()) {
      for (std::int64_t t = l + 1; t <= l + n; ++t) {
        for (std::int64_t x = 1; x < qq; ++x) expect += omega * chi(x) * polar_root(t * x, qq);
      }
    }
    const Interval j(q, l, n);
    const auto naive = bilinear_gauss(w, j, BilinearMethod::naive);
    const auto tr = bilinear_gauss(w, j, BilinearMethod::transformed);
    EXPECT_TRUE(within(naive, expect, 1e-9 * (1 + std::abs(expect))));
    EXPECT_TRUE(within(tr, expect, 1e-9 * (1 + std::abs(expect))));
    EXPECT_TRUE(agree(naive, tr));
  }
}

TEST(BilinearGeneralized, ExamplesAndOracle) {
  const Modulus three(3), five(5);
  EXPECT_TRUE(within(bilinear_generalized(WeightVector(three, {{1, 1.0}}), Interval(three, 0, 1), 1), -1.0));
  cplx expect{0.0, 0.0};
  for (std::int64_t x = 1; x < 5; ++x) expect += polar_root(brute_pow(brute_inverse(x, 5), 2, 5) + x, 5);
  EXPECT_TRUE(within(bilinear_generalized(WeightVector(five, {{1, 1.0}}), Interval(five, 0, 1), 2), expect));
  EXPECT_EQ(bilinear_generalized(WeightVector(five), Interval(five, 0, 4), 3).value, cplx(0.0, 0.0));
  EXPECT_THROW(bilinear_generalized(WeightVector(five, {{1, 1.0}}), Interval(five, 0, 1), 0), Error);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Modulus q(static_cast<std::int64_t>(rng() % 50) + 3);
    const int k = static_cast<int>(rng() % 4) + 1;
    const std::int64_t n = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q.value() - 1)) + 1;
    const auto a = make_weights(q, std::min<std::int64_t>(q.phi(), 6), WeightKind::unit, rng());
    const Interval j(q, 0, n);
    const auto g = bilinear_generalized(a, j, k);
    const cplx o = oracle_bilinear(a, 1, n, k);
    EXPECT_TRUE(within(g, o, 1e-9 * (1 + std::abs(o))));
    if (k == 1) EXPECT_TRUE(agree(g, bilinear_kloosterman(a, j, BilinearMethod::transformed)));
  }
}

TEST(Moment, Examples) {
  const Modulus five(5), seven(7);
  const std::vector<std::int64_t> one{1};
  auto m1 = moment_check(five, one, {{1, 1.0}}, 2);
  EXPECT_NEAR(m1.lhs, 5.0, 1e-12);
  EXPECT_NEAR(m1.rhs, 5.0, 1e-12);
  const std::vector<std::int64_t> two{1, 2};
  auto m2 = moment_check(five, two, {{1, 1.0}, {2, 1.0}}, 1);
  EXPECT_NEAR(m2.lhs, 10.0, 1e-12);
  EXPECT_NEAR(m2.rhs, 10.0, 1e-12);
  const std::vector<std::int64_t> three{1, 2, 3};
  auto m3 = moment_check(seven, three, {{1, 1.0}, {2, 1.0}, {3, 1.0}}, 2);
  EXPECT_NEAR(m3.lhs, m3.rhs, 1e-9);

  // Direct count of the 81 tuples for the last case.
  std::int64_t matches = 0;
  for (auto a : three)
    for (auto b : three)
      for (auto c : three)
        for (auto d : three)
          matches += (brute_inverse(a, 7) + brute_inverse(b, 7) - brute_inverse(c, 7) - brute_inverse(d, 7)) % 7 == 0;
  EXPECT_NEAR(m3.rhs, 7.0 * static_cast<double>(matches), 1e-9);
}

TEST(Moment, ErrorsAndPathsAgree) {
  const Modulus nine(9);
  const std::vector<std::int64_t> bad{3};
  EXPECT_THROW(moment_check(nine, bad, {{3, 1.0}}, 1), NotAUnit);
  const std::vector<std::int64_t> missing{2};
  EXPECT_THROW(moment_check(nine, missing, {}, 1), Error);

  const Modulus q(1009);
  std::vector<std::int64_t> xs(120);
  std::iota(xs.begin(), xs.end(), 1);
  std::map<std::int64_t, cplx> g;
  for (auto x : xs) g[x] = gamma_sum(Interval(q, 0, 30), x);
  try {
    moment_check(q, xs, g, 4, MomentMethod::exhaustive);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
  const auto conv = moment_check(q, xs, g, 4, MomentMethod::convolution);
  EXPECT_LE(std::abs(conv.lhs - conv.rhs), 1e-9 * conv.lhs);

  xs.resize(12);
  const auto ex = moment_check(q, xs, g, 3, MomentMethod::exhaustive);
  const auto cv = moment_check(q, xs, g, 3, MomentMethod::convolution);
  EXPECT_LE(std::abs(ex.rhs - cv.rhs), 1e-9 * ex.lhs);
  EXPECT_LE(std::abs(ex.lhs - ex.rhs), 1e-9 * ex.lhs);
}
