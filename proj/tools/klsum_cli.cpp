// Command-line front end: single sums, bilinear experiments, counts, region
// classification, average sweeps and the self-check suite.

#include <cstdio>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "klsum/bounds.hpp"
#include "klsum/counting.hpp"
#include "klsum/error.hpp"
#include "klsum/experiment.hpp"
#include "klsum/expsums.hpp"
#include "klsum/report.hpp"
#include "klsum/verify.hpp"

namespace {

using namespace klsum;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_output(const RunPlan& plan, const std::string& text) {
  if (plan.out.empty()) {
    std::cout << text;
    return;
  }
  FILE* f = std::fopen(plan.out.c_str(), "wb");
  if (f == nullptr) throw_error(ErrorKind::io, "cannot open '" + plan.out + "' for writing");
  const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
  if (std::fclose(f) != 0 || !ok) throw_error(ErrorKind::io, "error while writing '" + plan.out + "'");
}

std::vector<BilinearMethod> parse_methods(const std::string& list) {
  std::vector<BilinearMethod> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  return out;
}

int cmd_kloosterman(const RunPlan& plan) {
  const Modulus q(plan.q);
  const auto k = kloosterman(q, plan.m, plan.n);
  std::ostringstream os;
  os << "q=" << plan.q << " m=" << plan.m << " n=" << plan.n << " re=" << num(k.value.real())
     << " im=" << num(k.value.imag()) << " abs=" << num(std::abs(k.value)) << " error_bound=" << num(k.error_bound);
  if (q.is_prime() && q.is_unit(plan.m) && q.is_unit(plan.n)) os << " weil_ratio=" << num(weil_ratio(q, plan.m, plan.n));
  os << '\n';
  write_output(plan, os.str());
  return 0;
}

int cmd_gauss(const RunPlan& plan) {
  const Modulus q(plan.q);
  const auto prims = primitive_characters(q);
  if (prims.empty()) throw_error(ErrorKind::invalid_input, "no primitive characters modulo " + std::to_string(plan.q));
  if (plan.chi < 0 || plan.chi >= static_cast<std::int64_t>(prims.size())) {
    throw_error(ErrorKind::invalid_input, "--chi must lie in [0, " + std::to_string(prims.size() - 1) + "]");
  }
  const auto& chi = prims[static_cast<std::size_t>(plan.chi)];
  const auto g = gauss(q, chi, plan.n);
  std::ostringstream os;
  os << "q=" << plan.q << " chi=" << plan.chi << " order=" << chi.order() << " n=" << plan.n
     << " re=" << num(g.value.real()) << " im=" << num(g.value.imag()) << " abs=" << num(std::abs(g.value))
     << " sqrt_q=" << num(std::sqrt(static_cast<double>(plan.q))) << '\n';
  write_output(plan, os.str());
  return 0;
}

// The average-theorem bound is always reported, with the plan's r and epsilon.
ExperimentParams experiment_params(const RunPlan& plan) {
  ExperimentParams p;
  p.q = plan.q;
  p.M = plan.M;
  p.N = plan.N;
  p.L = plan.L;
  p.weights = parse_weight_kind(plan.weights);
  p.seed = plan.seed;
  p.family = parse_family(plan.family);
  p.methods = parse_methods(plan.method);
  p.r = plan.r;
  p.epsilon = plan.epsilon;
  return p;
}

int cmd_bilinear(const RunPlan& plan) {
  if (plan.k != 1) {
    if (parse_family(plan.family) != Family::kloosterman) {
      throw_error(ErrorKind::invalid_input, "--k applies to the kloosterman family only");
    }
    const Modulus q(plan.q);
    const auto a = make_weights(q, plan.M, parse_weight_kind(plan.weights), plan.seed);
    const auto s = bilinear_generalized(a, Interval(q, plan.L, plan.N), plan.k);
    write_output(plan, "q=" + std::to_string(plan.q) + " k=" + std::to_string(plan.k) + " re=" + num(s.value.real()) +
                           " im=" + num(s.value.imag()) + " abs=" + num(std::abs(s.value)) +
                           " error_bound=" + num(s.error_bound) + '\n');
    return 0;
  }
  write_output(plan, format_csv(run_experiment(experiment_params(plan))));
  return 0;
}

int cmd_count(const RunPlan& plan) {
  const auto kind = plan.kind == "reciprocal" ? CountKind::reciprocal
                    : plan.kind == "product"  ? CountKind::product
                                              : throw Error(ErrorKind::invalid_input, "--kind must be reciprocal or product");
  std::ostringstream os;
  if (plan.mode == "modular") {
    CountMethod method = CountMethod::convolution;
    if (plan.method == "exhaustive") method = CountMethod::exhaustive;
    else if (!plan.method.empty() && plan.method != "convolution") {
      throw_error(ErrorKind::invalid_input, "count --method must be convolution or exhaustive");
    }
    os << "q=" << plan.q << " K=" << plan.K << " r=" << plan.r << " kind=" << plan.kind
       << " count=" << congruence_count(Modulus(plan.q), plan.K, plan.r, kind, method) << '\n';
  } else if (plan.mode == "integers") {
    const auto c = kind == CountKind::reciprocal ? jr_equation(plan.K, plan.r) : rr_equation(plan.K, plan.r);
    os << "K=" << plan.K << " r=" << plan.r << " kind=" << plan.kind << " count=" << c << '\n';
  } else if (plan.mode == "average") {
    const auto avg = dyadic_average(plan.Q, plan.K, plan.r, kind);
    os << "Q=" << plan.Q << " K=" << plan.K << " r=" << plan.r << " kind=" << plan.kind << " total=" << avg.total
       << " mean=" << avg.mean_numerator() << '/' << avg.mean_denominator() << " (" << num(avg.mean()) << ")\n";
  } else {
    throw_error(ErrorKind::invalid_input, "--mode must be modular, integers or average");
  }
  write_output(plan, os.str());
  return 0;
}

int cmd_region(const RunPlan& plan) {
  write_output(plan, "mu=" + num(plan.mu) + " nu=" + num(plan.nu) + " region=" +
                         std::string(region_name(improvement_region(plan.mu, plan.nu))) + '\n');
  return 0;
}

int cmd_sweep(const RunPlan& plan) {
  const auto res = average_sweep(plan.Q, plan.N, plan.r, plan.epsilon, parse_weight_kind(plan.weights), plan.seed,
                                 parse_family(plan.family));
  write_output(plan, format_csv(res.records));
  std::cerr << "exceptional_count=" << res.exceptional_count << " fraction=" << num(res.exceptional_fraction)
            << " reference_Q^(-2r*eps)=" << num(res.reference_fraction)
            << " count/Q^(1-2r*eps)=" << num(res.normalized_count) << '\n';
  return 0;
}

int cmd_verify(const RunPlan& plan) {
  SuiteOptions opts;
  opts.quick = plan.quick;
  if (plan.baseline > 0.0) opts.ratio_baseline = plan.baseline;
  bool all = true;
  std::ostringstream os;
  for (const auto& r : run_invariant_suite(opts)) {
    all = all && r.passed;
    char time[32];
    std::snprintf(time, sizeof time, "%.2f", r.seconds);
    os << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << time << " s): " << r.detail << '\n';
  }
  write_output(plan, os.str());
  return all ? 0 : 1;
}

// The value following --config in argv, if any.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  try {
    RunPlan plan;
    const std::string config = find_config(argc, argv);
    if (!config.empty()) plan = load_config(config);

    CLI::App app{"Kloosterman and Gauss sum experiments"};
    app.require_subcommand(1);
    std::string config_path = config;
    bool dump_config = false;

    auto add = [&](CLI::App* sub, std::initializer_list<std::string_view> names) {
      sub->add_option("--config", config_path, "JSON run plan; flags given on the command line override it");
      sub->add_flag("--dump-config", dump_config, "print the merged run plan as JSON and exit");
      sub->add_option("--out", plan.out, "output file (default stdout)");
      for (auto name : names) {
        const std::string flag = "--" + std::string(name);
        if (name == "q") sub->add_option(flag, plan.q, "modulus")->capture_default_str();
        if (name == "m") sub->add_option(flag, plan.m, "first argument m")->capture_default_str();
        if (name == "n") sub->add_option(flag, plan.n, "second argument n")->capture_default_str();
        if (name == "K") sub->add_option(flag, plan.K, "range bound K")->capture_default_str();
        if (name == "r") sub->add_option(flag, plan.r, "moment / tuple parameter r")->capture_default_str();
        if (name == "epsilon") sub->add_option(flag, plan.epsilon, "exponent epsilon")->capture_default_str();
        if (name == "Q") sub->add_option(flag, plan.Q, "dyadic range start Q")->capture_default_str();
        if (name == "N") sub->add_option(flag, plan.N, "interval length N")->capture_default_str();
        if (name == "L") sub->add_option(flag, plan.L, "interval offset L")->capture_default_str();
        if (name == "M") sub->add_option(flag, plan.M, "weight support size M")->capture_default_str();
        if (name == "weights")
          sub->add_option(flag, plan.weights, "weight kind")
              ->check(CLI::IsMember({"const", "pm1", "unit", "zero"}))
              ->capture_default_str();
        if (name == "seed") sub->add_option(flag, plan.seed, "weight seed")->capture_default_str();
        if (name == "method") sub->add_option(flag, plan.method, "evaluation method(s), comma separated");
        if (name == "family")
          sub->add_option(flag, plan.family, "kloosterman or gauss")
              ->check(CLI::IsMember({"kloosterman", "gauss"}))
              ->capture_default_str();
        if (name == "kind") sub->add_option(flag, plan.kind, "reciprocal or product")->capture_default_str();
        if (name == "mode") sub->add_option(flag, plan.mode, "modular, integers or average")->capture_default_str();
        if (name == "mu") sub->add_option(flag, plan.mu, "log M / log q")->capture_default_str();
        if (name == "nu") sub->add_option(flag, plan.nu, "log N / log q")->capture_default_str();
        if (name == "chi") sub->add_option(flag, plan.chi, "index of the primitive character")->capture_default_str();
        if (name == "k") sub->add_option(flag, plan.k, "power of x^{-1} in the kernel")->capture_default_str();
        if (name == "quick") sub->add_flag(flag, plan.quick, "smaller ranges");
        if (name == "baseline") sub->add_option(flag, plan.baseline, "thm21 ratio baseline (0 for none)");
      }
      return sub;
    };

    auto* kl = add(app.add_subcommand("kloosterman", "K_q(m, n)"), {"q", "m", "n"});
    auto* ga = add(app.add_subcommand("gauss", "G_q(chi, n) for a primitive character"), {"q", "chi", "n"});
    auto* bi = add(app.add_subcommand("bilinear", "bilinear sum with seeded weights and its bounds (CSV)"),
                   {"q", "M", "N", "L", "weights", "seed", "method", "family", "r", "epsilon", "k"});
    auto* co = add(app.add_subcommand("count", "congruence and equation counts"),
                   {"q", "K", "r", "kind", "mode", "method", "Q"});
    auto* re = add(app.add_subcommand("region", "classify (mu, nu) against the improvement polygon"), {"mu", "nu"});
    auto* sw = add(app.add_subcommand("sweep", "average-theorem sweep over q in [Q, 2Q] (CSV)"),
                   {"Q", "N", "r", "epsilon", "weights", "seed", "family"});
    auto* ve = add(app.add_subcommand("verify", "run the self-check suite"), {"quick", "baseline"});

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      throw Error(ErrorKind::invalid_input, e.what());
    }

    for (auto* sub : app.get_subcommands()) plan.command = sub->get_name();
    if (dump_config) {
      std::cout << format_config(plan);
      return 0;
    }
    if (kl->parsed()) return cmd_kloosterman(plan);
    if (ga->parsed()) return cmd_gauss(plan);
    if (bi->parsed()) return cmd_bilinear(plan);
    if (co->parsed()) return cmd_count(plan);
    if (re->parsed()) return cmd_region(plan);
    if (sw->parsed()) return cmd_sweep(plan);
    if (ve->parsed()) return cmd_verify(plan);
    return 0;
  } catch (const klsum::Error& e) {
    std::cerr << "error: " << klsum::error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return klsum::error_exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
}
