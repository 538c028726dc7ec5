#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "fractalis/fft.hpp"

using fractalis::fft::cplx;

namespace {

// quadratic-time reference DFT
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(j * k) /
                         static_cast<double>(n);
      out[k] += x[j] * cplx(std::cos(ang), std::sin(ang));
    }
  }
  return out;
}

std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> x(n);
  for (auto& v : x) v = cplx(u(rng), u(rng));
  return x;
}

}  // namespace

TEST_SUITE("fft") {

TEST_CASE("matches the naive DFT for power-of-two and odd sizes") {
  for (std::size_t n : {2u, 8u, 64u, 3u, 12u, 100u, 257u, 384u}) {
    std::vector<cplx> x = random_signal(n, 42 + n);
    const std::vector<cplx> expected = naive_dft(x);
    fractalis::fft::forward(x);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(x[k] - expected[k]) < 1e-9 * static_cast<double>(n));
    }
  }
}

TEST_CASE("inverse undoes forward") {
  for (std::size_t n : {16u, 129u, 1000u}) {
    const std::vector<cplx> original = random_signal(n, 7 + n);
    std::vector<cplx> x = original;
    fractalis::fft::forward(x);
    fractalis::fft::inverse(x);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(x[k] - original[k]) < 1e-10);
    }
  }
}

TEST_CASE("pure tone lands in a single bin") {
  const std::size_t n = 128;
  std::vector<cplx> x(n);
  for (std::size_t j = 0; j < n; ++j) {
    x[j] = std::cos(2.0 * std::numbers::pi * 5.0 * static_cast<double>(j) / n);
  }
  fractalis::fft::forward(x);
  CHECK(std::abs(x[5]) == doctest::Approx(64.0).epsilon(1e-9));
  CHECK(std::abs(x[6]) < 1e-9);
}

}  // TEST_SUITE
