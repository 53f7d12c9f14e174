#include "klsum/dft.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "klsum/error.hpp"
#include "klsum/modmath.hpp"

namespace klsum {

Dft::Dft(std::size_t length) : n_(length) {
  if (n_ == 0) throw_error(ErrorKind::invalid_input, "Dft: length must be positive");
  bluestein_ = !std::has_single_bit(n_);
  padded_ = bluestein_ ? std::bit_ceil(2 * n_ - 1) : n_;

  twiddles_.resize(padded_ / 2);
  for (std::size_t k = 0; k < twiddles_.size(); ++k) {
    twiddles_[k] = eq_exp(static_cast<std::int64_t>(k), static_cast<std::int64_t>(padded_));
  }
  if (!bluestein_) return;

  const auto two_n = static_cast<std::int64_t>(2 * n_);
  chirp_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    chirp_[j] = eq_exp(mul_mod(static_cast<std::int64_t>(j), static_cast<std::int64_t>(j), two_n), two_n);
  }
  kernel_fft_.assign(padded_, {0.0, 0.0});
  kernel_fft_[0] = std::conj(chirp_[0]);
  for (std::size_t j = 1; j < n_; ++j) {
    kernel_fft_[j] = std::conj(chirp_[j]);
    kernel_fft_[padded_ - j] = std::conj(chirp_[j]);
  }
  radix2(kernel_fft_, false);
}

void Dft::radix2(std::span<std::complex<double>> a, bool inverse) const {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1U;
    for (; j & bit; bit >>= 1U) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1U) {
    const std::size_t stride = n / len;
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto w = inverse ? std::conj(twiddles_[k * stride]) : twiddles_[k * stride];
        const auto u = a[start + k];
        const auto v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

void Dft::transform(std::span<std::complex<double>> data) const {
  if (data.size() != n_) throw_error(ErrorKind::invalid_input, "Dft: length mismatch");
  if (!bluestein_) {
    radix2(data, false);
    return;
  }
  // x_j e(jk/n) = c_k * sum_j (x_j c_j) conj(c_{k-j}),  c_j = e_{2n}(j^2)
  std::vector<std::complex<double>> work(padded_, {0.0, 0.0});
  for (std::size_t j = 0; j < n_; ++j) work[j] = data[j] * chirp_[j];
  radix2(work, false);
  for (std::size_t i = 0; i < padded_; ++i) work[i] *= kernel_fft_[i];
  radix2(work, true);
  const double scale = 1.0 / static_cast<double>(padded_);
  for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * scale * chirp_[k];
}

double Dft::error_bound(double input_l2) const noexcept {
  const double p = static_cast<double>(padded_);
  return 8.0 * std::numeric_limits<double>::epsilon() * (std::log2(p) + 1.0) * std::sqrt(p) * input_l2;
}

}  // namespace klsum
