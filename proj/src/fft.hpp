#pragma once

#include <complex>
#include <span>

namespace quadsure::detail {

// Unnormalized in-place DFTs backed by FFTW.
// forward:  X_m = sum_k x_k e^{-2 pi i m k / M}
// backward: x_k = sum_m X_m e^{+2 pi i m k / M}
// Plans are cached per size behind a mutex; execution is thread-safe.
void fft_forward(std::span<std::complex<double>> data);
void fft_backward(std::span<std::complex<double>> data);

}  // namespace quadsure::detail
