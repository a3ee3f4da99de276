#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lrvkit::detail {

/// Half-spectrum of a real sequence: out[k] = sum_t x[t] exp(-2 pi i k t / n),
/// k = 0..n/2. Backed by FFTW; safe to call concurrently.
[[nodiscard]] std::vector<std::complex<double>> real_fft(std::span<const double> x);

/// Linear convolution of two real sequences via zero-padded transforms.
[[nodiscard]] std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b);

}  // namespace lrvkit::detail
