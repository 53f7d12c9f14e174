#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "klsum/bounds.hpp"
#include "klsum/error.hpp"
#include "klsum/experiment.hpp"
#include "klsum/report.hpp"

using namespace klsum;

namespace {

const ExperimentRecord& find(const std::vector<ExperimentRecord>& recs, std::string_view name) {
  for (const auto& r : recs) {
    if (r.bound_name == name) return r;
  }
  throw std::logic_error("missing bound " + std::string(name));
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("klsum_test_" + name);
}

BoundInputs inputs(double q, double m, double n, double l1, double l2, double linf) {
  BoundInputs in;
  in.q = q;
  in.m = m;
  in.n = n;
  in.norms = {l1, l2, linf};
  in.kernel_max = 2.0 * std::sqrt(q);
  return in;
}

std::vector<BoundSpec> all_specs() {
  std::vector<BoundSpec> specs;
  for (auto n : {BoundName::trivial, BoundName::fkm, BoundName::bfkmm, BoundName::shpzha, BoundName::combined,
                 BoundName::thm21, BoundName::thm23, BoundName::simple21}) {
    specs.push_back(BoundSpec::make(n));
  }
  specs.push_back(BoundSpec::make(BoundName::combined, std::nullopt, std::nullopt, true));
  specs.push_back(BoundSpec::make(BoundName::thm22, 2, 0.1));
  specs.push_back(BoundSpec::make(BoundName::thm24, 3, 0.05));
  return specs;
}

}  // namespace

TEST(Bounds, Examples) {
  const auto thm21 = bound_value(BoundSpec::make(BoundName::thm21), inputs(1e4, 10, 100, 100, 10, 1)).value;
  EXPECT_NEAR(thm21, std::sqrt(1000.0) * (std::pow(10.0, 0.25) * 1e4 + 10 * 1e3), 1e-6);
  EXPECT_NEAR(thm21 / 8.786e5, 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(bound_value(BoundSpec::make(BoundName::shpzha), inputs(1e4, 10, 100, 100, 10, 1)).value, 1e6);
  auto triv = inputs(3, 1, 1, 1, 1, 1);
  triv.kernel_max = 2.0;
  EXPECT_DOUBLE_EQ(bound_value(BoundSpec::make(BoundName::trivial), triv).value, 2.0);
  EXPECT_DOUBLE_EQ(bound_value(BoundSpec::make(BoundName::fkm), inputs(101, 5, 5, 7, 3, 1)).value, 707.0);

  // thm22 with r = 2, epsilon = 0: ||A||_1^{1/2} ||A||_2^{1/2} (q + N^{1/2} q^{3/4})
  const auto t22 = bound_value(BoundSpec::make(BoundName::thm22, 2, 0.0), inputs(81, 4, 16, 9, 4, 1)).value;
  EXPECT_NEAR(t22, 6.0 * (81 + 4 * 27), 1e-9);
}

TEST(Bounds, SideConditionAndCombined) {
  // M N <= p^{3/2} and M <= N^2 hold: bfkmm term participates in both variants
  const auto ok = inputs(1e6, 100, 100, 100, 10, 1);
  const auto b = bound_value(BoundSpec::make(BoundName::bfkmm), ok);
  ASSERT_TRUE(b.side_condition.has_value());
  EXPECT_TRUE(*b.side_condition);
  EXPECT_EQ(bound_value(BoundSpec::make(BoundName::combined), ok).value,
            bound_value(BoundSpec::make(BoundName::combined, std::nullopt, std::nullopt, true), ok).value);

  // M > N^2: the conditional variant may only grow
  const auto bad = inputs(1e6, 1e4, 10, 1e4, 100, 1);
  EXPECT_FALSE(*bound_value(BoundSpec::make(BoundName::bfkmm), bad).side_condition);
  const double free_min = bound_value(BoundSpec::make(BoundName::combined), bad).value;
  const double cond_min = bound_value(BoundSpec::make(BoundName::combined, std::nullopt, std::nullopt, true), bad).value;
  EXPECT_LE(free_min, cond_min);
  const double m = 1e4, n = 10, p = 1e6;
  EXPECT_NEAR(cond_min, std::min({m * n * std::sqrt(p), m * p, std::sqrt(m * n) * p}), 1e-6);
  EXPECT_NEAR(free_min, std::min(cond_min, std::pow(m, 5.0 / 6) * std::pow(n, 7.0 / 12) * std::pow(p, 0.75)), 1e-6);
}

TEST(Bounds, ParameterValidation) {
  auto kind_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::io;  // sentinel: no throw
  };
  EXPECT_EQ(kind_of([] { BoundSpec::make(BoundName::thm22); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { BoundSpec::make(BoundName::thm22, 1, 0.1); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { BoundSpec::make(BoundName::thm24, 2, -0.1); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { BoundSpec::make(BoundName::thm21, 2, 0.1); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { BoundSpec::make(BoundName::fkm, std::nullopt, std::nullopt, true); }), ErrorKind::invalid_input);
  EXPECT_EQ(kind_of([] { bound_value(BoundSpec{BoundName::thm22, 1, 0.1, false}, inputs(7, 1, 1, 1, 1, 1)); }),
            ErrorKind::invalid_input);
  auto no_kernel = inputs(7, 1, 1, 1, 1, 1);
  no_kernel.kernel_max.reset();
  EXPECT_EQ(kind_of([&] { bound_value(BoundSpec::make(BoundName::trivial), no_kernel); }), ErrorKind::invalid_input);
  EXPECT_EQ(parse_bound_name("simple21"), BoundName::simple21);
  EXPECT_THROW(parse_bound_name("nope"), Error);
}

TEST(Bounds, MonotoneInEachNorm) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double q = 2 + 1e5 * u(rng), m = 1 + 100 * u(rng), n = 1 + 100 * u(rng);
    const double l1 = 100 * u(rng), l2 = 50 * u(rng), linf = 10 * u(rng);
    const auto base = inputs(q, m, n, l1, l2, linf);
    for (const auto& spec : all_specs()) {
      const double v = bound_value(spec, base).value;
      EXPECT_GE(v, 0.0);
      for (int which = 0; which < 3; ++which) {
        auto bigger = base;
        double& slot = which == 0 ? bigger.norms.l1 : which == 1 ? bigger.norms.l2 : bigger.norms.linf;
        slot *= 1.0 + u(rng);
        slot += u(rng);
        EXPECT_GE(bound_value(spec, bigger).value, v) << spec.label();
      }
    }
  }
}

TEST(Region, Examples) {
  EXPECT_EQ(improvement_region(0.5, 0.5), Region::interior);
  EXPECT_EQ(improvement_region(0.25, 0.5), Region::boundary);
  EXPECT_EQ(improvement_region(0.1, 0.1), Region::outside);
  EXPECT_EQ(improvement_region(1.0 / 3, 2.0 / 3), Region::boundary);
  EXPECT_EQ(improvement_region(1.0, 1.0), Region::boundary);
  EXPECT_EQ(improvement_region(1.0, 2.0 / 3), Region::boundary);
  EXPECT_EQ(improvement_region(9.0 / 14, 3.0 / 7), Region::boundary);
  EXPECT_EQ(improvement_region(1.0, 0.8), Region::boundary);  // on the edge mu = 1
  EXPECT_THROW(improvement_region(-0.1, 0.5), Error);
  EXPECT_THROW(improvement_region(0.5, 1.5), Error);
  EXPECT_THROW(improvement_region(std::nan(""), 0.5), Error);
}

TEST(Region, AgreesWithInequalitiesOnAGrid) {
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double mu = i / 200.0, nu = j / 200.0;
      const bool inside = 2 * mu + 7 * nu >= 4 - 1e-12 && 2 * mu + 11 * nu >= 6 - 1e-12 && 1 + mu >= 2 * nu - 1e-12 &&
                          3 * nu >= 2 * mu - 1e-12 && 2 * mu >= nu - 1e-12;
      EXPECT_EQ(improvement_region(mu, nu) != Region::outside, inside) << mu << ' ' << nu;
    }
  }
}

TEST(Experiment, Examples) {
  ExperimentParams p;
  p.q = 3;
  p.M = 1;
  p.N = 1;
  p.weights = WeightKind::constant;
  const auto recs = run_experiment(p);
  const auto& triv = find(recs, "trivial");
  EXPECT_NEAR(triv.abs_sum, 1.0, 1e-12);
  EXPECT_NEAR(triv.bound_value, 2.0, 1e-12);
  EXPECT_NEAR(triv.ratio, 0.5, 1e-12);
  for (std::size_t i = 1; i < recs.size(); ++i) EXPECT_LT(recs[i - 1].bound_name, recs[i].bound_name);

  p.q = 5;
  p.M = 4;
  p.N = 4;
  EXPECT_NEAR(run_experiment(p).front().abs_sum, 4.0, 1e-12);

  p.weights = WeightKind::zero;
  for (const auto& r : run_experiment(p)) {
    EXPECT_EQ(r.abs_sum, 0.0);
    EXPECT_EQ(r.ratio, 0.0);
  }
}

TEST(Experiment, ApplicableBounds) {
  ExperimentParams p;
  p.q = 101;
  p.M = 5;
  p.N = 5;
  auto names = [&] {
    std::vector<std::string> out;
    for (const auto& s : applicable_bounds(p)) out.push_back(s.label());
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(names(), (std::vector<std::string>{"bfkmm", "combined", "combined_cond", "fkm", "shpzha", "simple21",
                                               "thm21", "trivial"}));
  p.L = 3;
  p.r = 2;
  p.epsilon = 0.1;
  EXPECT_EQ(names(), (std::vector<std::string>{"bfkmm", "combined", "combined_cond", "shpzha", "simple21", "thm21",
                                               "thm22", "trivial"}));
  p.q = 100;
  EXPECT_EQ(names(), (std::vector<std::string>{"simple21", "thm21", "thm22", "trivial"}));
  p.family = Family::gauss;
  EXPECT_EQ(names(), (std::vector<std::string>{"thm23", "thm24", "trivial"}));
}

TEST(Experiment, TrivialBoundAlwaysHolds) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 120; ++trial) {
    ExperimentParams p;
    p.q = static_cast<std::int64_t>(rng() % 600) + 3;
    const Modulus q(p.q);
    p.N = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p.q - 1)) + 1;
    p.L = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p.q - p.N));
    p.weights = static_cast<WeightKind>(rng() % 3);
    p.seed = rng();
    p.family = trial % 3 == 0 ? Family::gauss : Family::kloosterman;
    const std::int64_t cap = p.family == Family::gauss ? static_cast<std::int64_t>(primitive_characters(q).size()) : q.phi();
    if (cap == 0) continue;
    p.M = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap)) + 1;
    const auto& triv = find(run_experiment(p), "trivial");
    EXPECT_LE(triv.abs_sum - triv.error_bound, triv.bound_value) << p.q;
  }
}

TEST(Experiment, CrossCheckUsesRequestedMethods) {
  ExperimentParams p;
  p.q = 37;
  p.M = 10;
  p.N = 8;
  p.L = 4;
  p.methods = {BilinearMethod::naive, BilinearMethod::transformed, BilinearMethod::fast};
  const auto a = evaluate_sum(p);
  p.methods = {BilinearMethod::fast};
  const auto b = evaluate_sum(p);
  EXPECT_LE(std::abs(a.sum.value - b.sum.value), a.sum.error_bound + b.sum.error_bound);
  p.family = Family::gauss;
  p.methods = {BilinearMethod::fast};
  EXPECT_THROW(evaluate_sum(p), Error);
}

TEST(Sweep, KloostermanMatchesSingleRuns) {
  const auto s = average_sweep(16, 4, 2, 0.1, WeightKind::constant, 7, Family::kloosterman);
  ASSERT_EQ(s.records.size(), 17U);
  std::int64_t exceptional = 0;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& rec = s.records[i];
    EXPECT_EQ(rec.q, 16 + static_cast<std::int64_t>(i));
    EXPECT_EQ(rec.bound_name, "thm22");
    exceptional += rec.ratio > 1.0;
    ExperimentParams p;
    p.q = rec.q;
    p.M = Modulus(rec.q).phi();
    p.N = 4;
    p.weights = WeightKind::constant;
    p.seed = 7;
    p.r = 2;
    p.epsilon = 0.1;
    const auto& single = find(run_experiment(p), "thm22");
    EXPECT_EQ(single.abs_sum, rec.abs_sum);
    EXPECT_EQ(single.bound_value, rec.bound_value);
  }
  EXPECT_EQ(s.exceptional_count, exceptional);
  EXPECT_DOUBLE_EQ(s.reference_fraction, std::pow(16.0, -0.4));
  EXPECT_DOUBLE_EQ(s.normalized_count, static_cast<double>(exceptional) / std::pow(16.0, 0.6));
}

TEST(Sweep, ZeroWeightsAndSeedIndependence) {
  const auto zero = average_sweep(16, 4, 2, 0.1, WeightKind::zero, 1, Family::kloosterman);
  EXPECT_EQ(zero.exceptional_count, 0);
  for (const auto& r : zero.records) EXPECT_EQ(r.ratio, 0.0);

  const auto a = average_sweep(20, 5, 2, 0.1, WeightKind::pm1, 1, Family::kloosterman);
  const auto b = average_sweep(20, 5, 2, 0.1, WeightKind::pm1, 2, Family::kloosterman);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].q, b.records[i].q);
    EXPECT_EQ(a.records[i].bound_value, b.records[i].bound_value);
  }
  EXPECT_THROW(average_sweep(8, 4, 2, 0.1, WeightKind::pm1, 1, Family::kloosterman), Error);
}

TEST(Sweep, GaussCountsCharacters) {
  const auto s = average_sweep(32, 8, 3, 0.05, WeightKind::unit, 3, Family::gauss);
  ASSERT_EQ(s.records.size(), 33U);
  for (const auto& rec : s.records) {
    EXPECT_EQ(rec.bound_name, "thm24");
    EXPECT_EQ(s.characters_per_q.at(rec.q), Modulus(rec.q).phi());
    EXPECT_EQ(rec.M, static_cast<std::int64_t>(primitive_characters(Modulus(rec.q)).size()));
  }
}

TEST(Csv, HeaderAndRoundTrip) {
  ExperimentParams p;
  p.q = 53;
  p.M = 7;
  p.N = 6;
  p.weights = WeightKind::unit;
  p.seed = 5;
  auto recs = run_experiment(p);
  p.q = 47;
  for (auto& r : run_experiment(p)) recs.push_back(r);

  const std::string one = format_csv({recs.front()});
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 2);
  EXPECT_EQ(one.substr(0, one.find('\n')),
            "q,M,N,L,seed,weight_kind,norm1,norm2,norm_inf,abs_sum,error_bound,bound_name,bound_value,ratio,"
            "wall_time_seconds");

  const std::string text = format_csv(recs);
  const auto parsed = parse_csv(text);
  EXPECT_EQ(format_csv(parsed), text);
  ASSERT_EQ(parsed.size(), recs.size());
  EXPECT_EQ(parsed.front().q, 47);  // canonical order puts the smaller modulus first
  auto sorted = recs;
  canonical_sort(sorted);
  EXPECT_EQ(parsed, sorted);

  const auto path = temp_file("roundtrip.csv");
  emit_csv(recs, path);
  EXPECT_EQ(load_csv(path), sorted);
  std::filesystem::remove(path);
}

TEST(Csv, ErrorsCarryContext) {
  try {
    emit_csv({}, "/nonexistent-dir/x.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/x.csv"), std::string::npos);
  }
  EXPECT_THROW(parse_csv("wrong,header\n"), Error);
  EXPECT_THROW(parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"), Error);
}

TEST(Config, DefaultsRoundTrip) {
  const auto path = temp_file("plan.json");
  save_config(RunPlan{}, path);
  EXPECT_EQ(load_config(path), RunPlan{});
  std::filesystem::remove(path);

  RunPlan custom;
  custom.command = "sweep";
  custom.Q = 64;
  custom.epsilon = 0.25;
  custom.seed = 18446744073709551615ULL;
  custom.quick = true;
  EXPECT_EQ(parse_config(format_config(custom)), custom);
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  try {
    parse_config(R"({"q": 7, "bogus": 1})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  try {
    parse_config(R"({"q": "seven"})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config);
    EXPECT_NE(std::string(e.what()).find("'q'"), std::string::npos);
  }
  EXPECT_THROW(parse_config("[1, 2]"), Error);
  EXPECT_THROW(parse_config("{not json"), Error);
  try {
    load_config("/nonexistent-dir/plan.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/plan.json"), std::string::npos);
  }
  const auto partial = parse_config(R"({"q": 7, "weights": "unit"})");
  EXPECT_EQ(partial.q, 7);
  EXPECT_EQ(partial.weights, "unit");
  EXPECT_EQ(partial.N, RunPlan{}.N);
}
