#include "fractalis/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fractalis::fft {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative Cooley-Tukey, n a power of two. sign = -1 forward, +1 inverse
// (without the 1/n factor).
void radix2(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx u = a[i + k];
        const cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein's algorithm: expresses an arbitrary-size DFT as a convolution,
// evaluated with power-of-two FFTs. Chirp phases use k^2 mod 2n to keep the
// trig arguments small.
void bluestein(std::vector<cplx>& x, int sign) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(2 * n - 1);

  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), std::sin(ang));
  }

  std::vector<cplx> a(m, cplx(0.0, 0.0));
  std::vector<cplx> b(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(chirp[k]);
    b[m - k] = std::conj(chirp[k]);
  }

  radix2(a, -1);
  radix2(b, -1);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2(a, +1);
  const double inv_m = 1.0 / static_cast<double>(m);

  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * inv_m * chirp[k];
}

void transform(std::vector<cplx>& x, int sign) {
  if (x.empty()) throw std::invalid_argument("fft: empty input");
  if (x.size() == 1) return;
  if (is_pow2(x.size())) {
    radix2(x, sign);
  } else {
    bluestein(x, sign);
  }
}

}  // namespace

void forward(std::vector<cplx>& x) { transform(x, -1); }

void inverse(std::vector<cplx>& x) {
  transform(x, +1);
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v *= inv_n;
}

std::vector<cplx> forward_real(const std::vector<double>& x) {
  std::vector<cplx> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = cplx(x[i], 0.0);
  forward(c);
  return c;
}

}  // namespace fractalis::fft
