#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace fractalis::fft {

using cplx = std::complex<double>;

// In-place forward DFT: X[k] = sum_j x[j] exp(-2*pi*i*j*k/n).
// Radix-2 for power-of-two sizes, Bluestein's chirp-z otherwise.
void forward(std::vector<cplx>& x);

// In-place inverse DFT (includes the 1/n factor).
void inverse(std::vector<cplx>& x);

// Forward DFT of a real signal; returns the full complex spectrum.
std::vector<cplx> forward_real(const std::vector<double>& x);

}  // namespace fractalis::fft
