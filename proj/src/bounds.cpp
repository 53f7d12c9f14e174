#include "klsum/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "klsum/error.hpp"

namespace klsum {

namespace {

constexpr std::array<std::pair<BoundName, std::string_view>, 10> kNames{{
    {BoundName::trivial, "trivial"},
    {BoundName::fkm, "fkm"},
    {BoundName::bfkmm, "bfkmm"},
    {BoundName::shpzha, "shpzha"},
    {BoundName::combined, "combined"},
    {BoundName::thm21, "thm21"},
    {BoundName::thm22, "thm22"},
    {BoundName::thm23, "thm23"},
    {BoundName::thm24, "thm24"},
    {BoundName::simple21, "simple21"},
}};

bool needs_average_params(BoundName n) { return n == BoundName::thm22 || n == BoundName::thm24; }

}  // namespace

std::string_view bound_name(BoundName name) noexcept {
  for (const auto& [n, s] : kNames) {
    if (n == name) return s;
  }
  return "unknown";
}

BoundName parse_bound_name(std::string_view text) {
  for (const auto& [n, s] : kNames) {
    if (s == text) return n;
  }
  throw_error(ErrorKind::invalid_input, "unknown bound name '" + std::string(text) + "'");
}

BoundSpec BoundSpec::make(BoundName name, std::optional<int> r, std::optional<double> epsilon,
                          bool honor_side_condition) {
  if (needs_average_params(name)) {
    if (!r || !epsilon) {
      throw_error(ErrorKind::invalid_input, std::string(bound_name(name)) + " requires r and epsilon");
    }
    if (*r < 2) throw_error(ErrorKind::invalid_input, std::string(bound_name(name)) + " requires r >= 2");
    if (*epsilon < 0.0) throw_error(ErrorKind::invalid_input, "epsilon must be non-negative");
  } else if (r || epsilon) {
    throw_error(ErrorKind::invalid_input, std::string(bound_name(name)) + " takes no r / epsilon parameters");
  }
  if (honor_side_condition && name != BoundName::combined) {
    throw_error(ErrorKind::invalid_input, "the side-condition flag only applies to the combined bound");
  }
  return BoundSpec{name, r, epsilon, honor_side_condition};
}

std::string BoundSpec::label() const {
  std::string s(bound_name(name));
  if (honor_side_condition) s += "_cond";
  return s;
}

BoundEvaluation bound_value(const BoundSpec& spec, const BoundInputs& in) {
  // Re-validate so hand-built specs get the same checks as make().
  (void)BoundSpec::make(spec.name, spec.r, spec.epsilon, spec.honor_side_condition);
  if (!(in.q >= 2.0) || !(in.n >= 1.0) || !(in.m >= 0.0) || in.norms.l1 < 0.0 || in.norms.l2 < 0.0 ||
      in.norms.linf < 0.0) {
    throw_error(ErrorKind::invalid_input, "bound_value: q >= 2, N >= 1 and non-negative M and norms required");
  }
  const double q = in.q, m = in.m, n = in.n;
  const Norms& a = in.norms;
  const bool side = m * n <= std::pow(q, 1.5) && m <= n * n;

  BoundEvaluation out;
  switch (spec.name) {
    case BoundName::trivial:
      if (!in.kernel_max) throw_error(ErrorKind::invalid_input, "trivial bound needs the kernel maximum");
      out.value = a.l1 * n * *in.kernel_max;
      break;
    case BoundName::fkm:
      out.value = a.l1 * q;
      break;
    case BoundName::bfkmm:
      out.value = std::sqrt(a.l1 * a.l2) * std::pow(m, 1.0 / 12) * std::pow(n, 7.0 / 12) * std::pow(q, 0.75);
      out.side_condition = side;
      break;
    case BoundName::shpzha:
      out.value = a.l2 * std::sqrt(n) * q;
      break;
    case BoundName::combined: {
      double best = std::min({m * n * std::sqrt(q), m * q, std::sqrt(m * n) * q});
      if (!spec.honor_side_condition || side) {
        best = std::min(best, std::pow(m, 5.0 / 6) * std::pow(n, 7.0 / 12) * std::pow(q, 0.75));
      }
      out.value = a.linf * best;
      out.side_condition = side;
      break;
    }
    case BoundName::thm21:
      out.value = std::sqrt(a.l1 * a.l2) * (std::pow(n, 0.125) * q + std::sqrt(n) * std::pow(q, 0.75));
      break;
    case BoundName::simple21:
      out.value = a.linf * std::pow(m, 0.75) * (std::pow(n, 0.125) * q + std::sqrt(n) * std::pow(q, 0.75));
      break;
    case BoundName::thm23:
      out.value = std::sqrt(a.l1 * a.l2) * (q + std::sqrt(n) * std::pow(q, 0.75));
      break;
    case BoundName::thm22:
    case BoundName::thm24: {
      const double r = *spec.r;
      out.value = std::pow(a.l1, 1.0 - 1.0 / r) * std::pow(a.l2, 1.0 / r) *
                  (q + std::sqrt(n) * std::pow(q, 0.5 + 0.5 / r)) * std::pow(q, *spec.epsilon);
      break;
    }
  }
  return out;
}

std::string_view region_name(Region r) noexcept {
  switch (r) {
    case Region::interior: return "interior";
    case Region::boundary: return "boundary";
    case Region::outside: return "outside";
  }
  return "outside";
}

Region improvement_region(double mu, double nu) {
  if (!(mu >= 0.0 && mu <= 1.0 && nu >= 0.0 && nu <= 1.0)) {
    throw_error(ErrorKind::invalid_input, "improvement_region: mu and nu must lie in [0, 1]");
  }
  // Each entry is lhs - rhs of an inequality lhs >= rhs.
  const std::array<double, 6> slack{
      2 * mu + 7 * nu - 4, 2 * mu + 11 * nu - 6, 1 + mu - 2 * nu, 3 * nu - 2 * mu, 2 * mu - nu, 1 - mu,
  };
  bool on_edge = false;
  for (double s : slack) {
    if (s < -kRegionTolerance) return Region::outside;
    if (s <= kRegionTolerance) on_edge = true;
  }
  return on_edge ? Region::boundary : Region::interior;
}

}  // namespace klsum
