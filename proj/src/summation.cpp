#include "klsum/summation.hpp"

#include <algorithm>
#include <cmath>

namespace klsum {

namespace {

inline void neumaier(double& sum, double& comp, double x) noexcept {
  const double t = sum + x;
  if (std::fabs(sum) >= std::fabs(x)) {
    comp += (sum - t) + x;
  } else {
    comp += (x - t) + sum;
  }
  sum = t;
}

inline double magnitude(double re, double im) noexcept { return std::sqrt(re * re + im * im); }

}  // namespace

void ErrorTrackedSum::add(std::complex<double> term, double term_error) noexcept {
  neumaier(re_, re_c_, term.real());
  neumaier(im_, im_c_, term.imag());
  abs_total_ += magnitude(term.real(), term.imag());
  propagated_ += term_error;
  ++terms_;
  max_partial_ = std::max(max_partial_, magnitude(re_ + re_c_, im_ + im_c_));
}

std::complex<double> ErrorTrackedSum::value() const noexcept { return {re_ + re_c_, im_ + im_c_}; }

SumResult ErrorTrackedSum::result() const noexcept {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  SumResult r;
  r.value = value();
  r.terms = terms_;
  r.error_bound = propagated_ + kTermUlps * eps * abs_total_ + static_cast<double>(terms_) * eps * max_partial_;
  return r;
}

}  // namespace klsum
