#include "klsum/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "klsum/error.hpp"
#include "klsum/expsums.hpp"
#include "klsum/parallel.hpp"

namespace klsum {

namespace {

constexpr std::array<std::pair<BilinearMethod, std::string_view>, 3> kMethodNames{{
    {BilinearMethod::naive, "naive"},
    {BilinearMethod::transformed, "transformed"},
    {BilinearMethod::fast, "fast"},
}};

std::vector<BilinearMethod> resolved_methods(const ExperimentParams& p) {
  if (!p.methods.empty()) return p.methods;
  if (p.family == Family::gauss) return {BilinearMethod::transformed};
  return {BilinearMethod::transformed, BilinearMethod::fast};
}

// Slack on top of the summed error bounds when two paths are compared.
constexpr double kAgreementSlack = 1e-9;

void cross_check(const std::vector<BilinearMethod>& methods, const std::vector<SumResult>& results) {
  for (std::size_t i = 1; i < results.size(); ++i) {
    const double diff = std::abs(results[i].value - results[0].value);
    const double allowed = results[i].error_bound + results[0].error_bound + kAgreementSlack;
    if (diff > allowed) {
      throw_error(ErrorKind::path_disagreement,
                  std::string(method_name(methods[i])) + " and " + std::string(method_name(methods[0])) +
                      " differ by " + std::to_string(diff) + " (allowed " + std::to_string(allowed) + ")");
    }
  }
}

ExperimentRecord make_record(const ExperimentParams& p, const SumEvaluation& ev, const BoundSpec& spec,
                             double bound) {
  ExperimentRecord rec;
  rec.q = p.q;
  rec.M = ev.support;
  rec.N = p.N;
  rec.L = p.L;
  rec.seed = p.seed;
  rec.weight_kind = std::string(weight_kind_name(p.weights));
  rec.norm1 = ev.norms.l1;
  rec.norm2 = ev.norms.l2;
  rec.norm_inf = ev.norms.linf;
  rec.abs_sum = std::abs(ev.sum.value);
  rec.error_bound = ev.sum.error_bound;
  rec.bound_name = spec.label();
  rec.bound_value = bound;
  // A zero sum is reported with ratio 0 even when the bound vanishes too.
  rec.ratio = rec.abs_sum == 0.0 ? 0.0 : rec.abs_sum / bound;
  rec.wall_time_seconds = ev.seconds;
  return rec;
}

BoundInputs bound_inputs(const ExperimentParams& p, const SumEvaluation& ev) {
  BoundInputs in;
  in.q = static_cast<double>(p.q);
  in.m = static_cast<double>(ev.support);
  in.n = static_cast<double>(p.N);
  in.norms = ev.norms;
  return in;
}

}  // namespace

std::string_view family_name(Family f) noexcept { return f == Family::gauss ? "gauss" : "kloosterman"; }

Family parse_family(std::string_view text) {
  if (text == "kloosterman") return Family::kloosterman;
  if (text == "gauss") return Family::gauss;
  throw_error(ErrorKind::invalid_input, "unknown family '" + std::string(text) + "' (kloosterman|gauss)");
}

std::string_view method_name(BilinearMethod m) noexcept {
  for (const auto& [k, s] : kMethodNames) {
    if (k == m) return s;
  }
  return "unknown";
}

BilinearMethod parse_method(std::string_view text) {
  for (const auto& [k, s] : kMethodNames) {
    if (s == text) return k;
  }
  throw_error(ErrorKind::invalid_input, "unknown method '" + std::string(text) + "' (naive|transformed|fast)");
}

SumEvaluation evaluate_sum(const ExperimentParams& p) {
  const Modulus q(p.q);
  const Interval j(q, p.L, p.N);
  if (p.M < 0) throw_error(ErrorKind::invalid_input, "support size M must be non-negative");
  const auto methods = resolved_methods(p);

  const auto start = std::chrono::steady_clock::now();
  SumEvaluation ev;
  ev.support = p.M;
  std::vector<SumResult> results;
  if (p.family == Family::kloosterman) {
    const auto a = make_weights(q, p.M, p.weights, p.seed);
    ev.norms = a.norms();
    for (auto m : methods) results.push_back(bilinear_kloosterman(a, j, m));
  } else {
    const auto w = make_char_weights(q, p.M, p.weights, p.seed);
    ev.norms = w.norms();
    for (auto m : methods) results.push_back(bilinear_gauss(w, j, m));
  }
  cross_check(methods, results);
  ev.sum = results.front();
  ev.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return ev;
}

std::vector<BoundSpec> applicable_bounds(const ExperimentParams& p) {
  const bool average = p.r.has_value() && p.epsilon.has_value();
  std::vector<BoundSpec> specs;
  specs.push_back(BoundSpec::make(BoundName::trivial));
  if (p.family == Family::gauss) {
    specs.push_back(BoundSpec::make(BoundName::thm23));
    if (average) specs.push_back(BoundSpec::make(BoundName::thm24, p.r, p.epsilon));
    return specs;
  }
  specs.push_back(BoundSpec::make(BoundName::thm21));
  specs.push_back(BoundSpec::make(BoundName::simple21));
  if (average) specs.push_back(BoundSpec::make(BoundName::thm22, p.r, p.epsilon));
  if (Modulus(p.q).is_prime()) {
    // The earlier bounds are stated for prime moduli; fkm also needs J to
    // start at 1 (the weights always sit on an initial segment of units).
    if (p.L == 0) specs.push_back(BoundSpec::make(BoundName::fkm));
    specs.push_back(BoundSpec::make(BoundName::bfkmm));
    specs.push_back(BoundSpec::make(BoundName::shpzha));
    specs.push_back(BoundSpec::make(BoundName::combined));
    specs.push_back(BoundSpec::make(BoundName::combined, std::nullopt, std::nullopt, true));
  }
  return specs;
}

std::vector<ExperimentRecord> run_experiment(const ExperimentParams& p) {
  const auto ev = evaluate_sum(p);
  const Modulus q(p.q);
  auto in = bound_inputs(p, ev);
  in.kernel_max = p.family == Family::gauss
                      ? std::sqrt(static_cast<double>(p.q))
                      : kloosterman_max_abs(q, p.L + 1, p.L + p.N);

  std::vector<ExperimentRecord> records;
  for (const auto& spec : applicable_bounds(p)) {
    records.push_back(make_record(p, ev, spec, bound_value(spec, in).value));
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.bound_name < b.bound_name; });
  return records;
}

SweepResult average_sweep(std::int64_t big_q, std::int64_t n, int r, double epsilon, WeightKind weights,
                          std::uint64_t seed, Family family) {
  if (big_q < 16) throw_error(ErrorKind::invalid_input, "average_sweep needs Q >= 16");
  if (n < 1 || n > big_q - 1) throw_error(ErrorKind::invalid_input, "average_sweep needs 1 <= N <= Q - 1");
  const auto spec = BoundSpec::make(family == Family::gauss ? BoundName::thm24 : BoundName::thm22, r, epsilon);

  const auto count = static_cast<std::size_t>(big_q + 1);
  std::vector<ExperimentRecord> records(count);
  std::vector<std::int64_t> char_counts(count, 0);
  parallel_for(count, [&](std::size_t i) {
    ExperimentParams p;
    p.q = big_q + static_cast<std::int64_t>(i);
    const Modulus q(p.q);
    p.N = n;
    p.weights = weights;
    p.seed = seed;
    p.family = family;
    p.r = r;
    p.epsilon = epsilon;
    if (family == Family::gauss) {
      std::int64_t total = 0, primitive = 0;
      for (const auto& chi : characters(q)) {
        ++total;
        primitive += chi.is_primitive() ? 1 : 0;
      }
      char_counts[i] = total;
      p.M = primitive;
    } else {
      p.M = q.phi();
    }
    const auto ev = evaluate_sum(p);
    records[i] = make_record(p, ev, spec, bound_value(spec, bound_inputs(p, ev)).value);
  });

  SweepResult out;
  out.records = std::move(records);
  for (const auto& rec : out.records) out.exceptional_count += rec.ratio > 1.0 ? 1 : 0;
  const double bq = static_cast<double>(big_q);
  out.exceptional_fraction = static_cast<double>(out.exceptional_count) / (bq + 1.0);
  out.normalized_count = static_cast<double>(out.exceptional_count) / std::pow(bq, 1.0 - 2.0 * r * epsilon);
  out.reference_fraction = std::pow(bq, -2.0 * r * epsilon);
  if (family == Family::gauss) {
    for (std::size_t i = 0; i < count; ++i) out.characters_per_q.emplace(big_q + static_cast<std::int64_t>(i), char_counts[i]);
  }
  return out;
}

}  // namespace klsum
