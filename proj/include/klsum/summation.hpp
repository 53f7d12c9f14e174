#pragma once

#include <complex>
#include <cstdint>
#include <limits>

namespace klsum {

/// A computed complex sum with a bound on its accumulated floating-point error.
struct SumResult {
  std::complex<double> value{0.0, 0.0};
  double error_bound = 0.0;
  std::int64_t terms = 0;
};

/// Relative error allowed for each individual summand (kernel evaluation
/// plus a few multiplications), in units of machine epsilon.
inline constexpr double kTermUlps = 8.0;

/// Neumaier-compensated complex accumulator that also tracks an error budget:
///
///   error_bound = sum_i term_error_i + kTermUlps * eps * sum_i |t_i|
///               + terms * eps * max_partial
///
/// where term_error_i is the caller-supplied absolute error of summand i
/// (e.g. propagated from an inner sum) and max_partial is the largest
/// magnitude reached by any partial sum.
class ErrorTrackedSum {
 public:
  void add(std::complex<double> term, double term_error = 0.0) noexcept;

  SumResult result() const noexcept;
  std::complex<double> value() const noexcept;
  std::int64_t terms() const noexcept { return terms_; }

 private:
  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
  double abs_total_ = 0.0;
  double propagated_ = 0.0;
  double max_partial_ = 0.0;
  std::int64_t terms_ = 0;
};

}  // namespace klsum
