#pragma once

#include <cstdint>
#include <cstddef>
#include <string>

#include "fractalis/core.hpp"

namespace fractalis::synth {

enum class Kind { white_noise, fgn, fbm, weierstrass, binomial_cascade };

Kind kind_from_name(const std::string& name);

// One description covering every generator; ranges are checked by
// generate().
struct GeneratorSpec {
  Kind kind{Kind::fgn};
  std::size_t length{16384};  // cascade length is 2^depth
  std::uint64_t seed{0};
  double rate_hz{128.0};
  double hurst{0.7};              // fgn/fbm, in (0,1)
  double dimension{1.5};          // weierstrass, in (1,2)
  double gamma{5.0};              // weierstrass frequency ratio, > 1
  double samples_per_unit{0.0};   // weierstrass grid density; 0 means length
  double p{0.75};                 // cascade weight, in (0.5,1)
  int depth{16};                  // cascade depth, <= 24

  void validate() const;
};

TimeSeries generate(const GeneratorSpec& spec);

// Unit-variance Gaussian white noise.
TimeSeries gen_white_noise(std::size_t n, std::uint64_t seed, double rate_hz = 128.0);

// Stationary fractional Gaussian noise with Hurst exponent H in (0,1).
// Sampled by circulant embedding of the exact autocovariance
//   rho(k) = 0.5*(|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}),
// so the covariance structure is exact (not asymptotic). Deterministic per
// seed.
TimeSeries gen_fgn(double hurst, std::size_t n, std::uint64_t seed, double rate_hz = 128.0);

// Fractional Brownian motion: cumulative sum of gen_fgn increments with the
// same seed; sample i holds the sum of increments 0..i.
TimeSeries gen_fbm(double hurst, std::size_t n, std::uint64_t seed, double rate_hz = 128.0);

// Weierstrass cosine series W(t) = sum_k gamma^{(D-2)k} cos(2*pi*gamma^k*t)
// sampled at samples_per_unit points per t-unit. Terms are kept while their
// frequency stays at or below the sample grid's Nyquist limit; the graph of
// the full series has box dimension D.
TimeSeries gen_weierstrass(double dimension, double gamma, std::size_t n,
                           double samples_per_unit, double rate_hz = 128.0);

// Random binomial measure of length 2^depth: unit mass split recursively
// into (p, 1-p) shares, the heavier side chosen by a seeded coin per node.
// Analytic mass exponent: tau(q) = -ln(p^q + (1-p)^q) / ln 2.
TimeSeries gen_binomial_cascade(double p, int depth, std::uint64_t seed, double rate_hz = 128.0);

// Closed-form tau(q) of the binomial cascade, the oracle for multifractal
// estimators.
double cascade_mass_exponent(double p, double q);

}  // namespace fractalis::synth
