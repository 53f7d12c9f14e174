#pragma once

// Discrete Fourier transform of arbitrary length. Power-of-two lengths use an
// iterative radix-2 transform; any other length is reduced to a power-of-two
// cyclic convolution with the chirp e_{2n}(j^2) (Bluestein).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace klsum {

class Dft {
 public:
  explicit Dft(std::size_t length);

  std::size_t length() const noexcept { return n_; }

  /// Length of the internal power-of-two transform (n itself when n is a
  /// power of two).
  std::size_t padded_length() const noexcept { return padded_; }

  /// In place: data[k] <- sum_j data[j] * exp(+2 pi i j k / n).
  void transform(std::span<std::complex<double>> data) const;

  /// Documented per-entry absolute error budget of transform() for an input
  /// with Euclidean norm `input_l2`: 8 eps (log2 P + 1) sqrt(P) ||x||_2 with
  /// P the padded length.
  double error_bound(double input_l2) const noexcept;

 private:
  void radix2(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::size_t padded_;
  bool bluestein_;
  std::vector<std::complex<double>> twiddles_;  // e_P(k), k < P/2
  std::vector<std::complex<double>> chirp_;     // e_{2n}(j^2), j < n
  std::vector<std::complex<double>> kernel_fft_;
};

}  // namespace klsum
