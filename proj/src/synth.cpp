#include "fractalis/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fractalis/fft.hpp"

namespace fractalis::synth {

namespace {

double fgn_autocov(double hurst, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

}  // namespace

Kind kind_from_name(const std::string& name) {
  if (name == "white_noise") return Kind::white_noise;
  if (name == "fgn") return Kind::fgn;
  if (name == "fbm") return Kind::fbm;
  if (name == "weierstrass") return Kind::weierstrass;
  if (name == "binomial_cascade") return Kind::binomial_cascade;
  throw std::invalid_argument("synth: unknown kind '" + name + "'");
}

void GeneratorSpec::validate() const {
  switch (kind) {
    case Kind::white_noise:
      break;
    case Kind::fgn:
    case Kind::fbm:
      if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::invalid_argument("GeneratorSpec: hurst must lie in (0,1)");
      }
      break;
    case Kind::weierstrass:
      if (!(dimension > 1.0 && dimension < 2.0)) {
        throw std::invalid_argument("GeneratorSpec: dimension must lie in (1,2)");
      }
      if (!(gamma > 1.0)) throw std::invalid_argument("GeneratorSpec: gamma must exceed 1");
      break;
    case Kind::binomial_cascade:
      if (!(p > 0.5 && p < 1.0)) throw std::invalid_argument("GeneratorSpec: p must lie in (0.5,1)");
      if (depth < 4 || depth > 24) {
        throw std::invalid_argument("GeneratorSpec: depth must lie in [4,24]");
      }
      break;
  }
  const std::size_t effective_length =
      kind == Kind::binomial_cascade ? (std::size_t{1} << depth) : length;
  if (effective_length < 16) throw std::invalid_argument("GeneratorSpec: length must be >= 16");
}

TimeSeries generate(const GeneratorSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case Kind::white_noise:
      return gen_white_noise(spec.length, spec.seed, spec.rate_hz);
    case Kind::fgn:
      return gen_fgn(spec.hurst, spec.length, spec.seed, spec.rate_hz);
    case Kind::fbm:
      return gen_fbm(spec.hurst, spec.length, spec.seed, spec.rate_hz);
    case Kind::weierstrass: {
      const double spu =
          spec.samples_per_unit > 0.0 ? spec.samples_per_unit : static_cast<double>(spec.length);
      return gen_weierstrass(spec.dimension, spec.gamma, spec.length, spu, spec.rate_hz);
    }
    case Kind::binomial_cascade:
      return gen_binomial_cascade(spec.p, spec.depth, spec.seed, spec.rate_hz);
  }
  throw std::invalid_argument("GeneratorSpec: unknown kind");
}

TimeSeries gen_white_noise(std::size_t n, std::uint64_t seed, double rate_hz) {
  if (n < 2) throw std::invalid_argument("gen_white_noise: n must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  TimeSeries out;
  out.rate_hz = rate_hz;
  out.samples.resize(n);
  for (auto& v : out.samples) v = gauss(rng);
  return out;
}

TimeSeries gen_fgn(double hurst, std::size_t n, std::uint64_t seed, double rate_hz) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::invalid_argument("gen_fgn: hurst must lie in (0,1)");
  }
  if (n < 16) throw std::invalid_argument("gen_fgn: n must be >= 16");

  // Doubled circulant: first row holds the autocovariance out to lag n,
  // mirrored so the matrix is symmetric.
  const std::size_t m = 2 * n;
  std::vector<fft::cplx> c(m);
  c[0] = fgn_autocov(hurst, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    const double g = fgn_autocov(hurst, k);
    c[k] = g;
    if (k < n) c[m - k] = g;
  }

  fft::forward(c);
  std::vector<double> lambda(m);
  double lambda_max = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    lambda[k] = c[k].real();
    lambda_max = std::max(lambda_max, lambda[k]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (lambda[k] < -1e-8 * lambda_max) {
      throw std::runtime_error("gen_fgn: circulant embedding not positive semidefinite");
    }
    lambda[k] = std::max(lambda[k], 0.0);
  }

  // Spectral synthesis: conjugate-symmetric complex Gaussians weighted by
  // sqrt(lambda); the first n samples of the inverse transform carry the
  // exact target covariance.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<fft::cplx> y(m);
  y[0] = std::sqrt(lambda[0]) * gauss(rng);
  for (std::size_t k = 1; k < n; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    const double w = std::sqrt(0.5 * lambda[k]);
    y[k] = fft::cplx(w * re, w * im);
    y[m - k] = std::conj(y[k]);
  }
  y[n] = std::sqrt(lambda[n]) * gauss(rng);

  fft::inverse(y);
  const double scale = std::sqrt(static_cast<double>(m));

  TimeSeries out;
  out.rate_hz = rate_hz;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = scale * y[i].real();
  return out;
}

TimeSeries gen_fbm(double hurst, std::size_t n, std::uint64_t seed, double rate_hz) {
  TimeSeries increments = gen_fgn(hurst, n, seed, rate_hz);
  double acc = 0.0;
  for (auto& v : increments.samples) {
    acc += v;
    v = acc;
  }
  return increments;
}

TimeSeries gen_weierstrass(double dimension, double gamma, std::size_t n,
                           double samples_per_unit, double rate_hz) {
  if (!(dimension > 1.0 && dimension < 2.0)) {
    throw std::invalid_argument("gen_weierstrass: dimension must lie in (1,2)");
  }
  if (!(gamma > 1.0)) throw std::invalid_argument("gen_weierstrass: gamma must exceed 1");
  if (n < 16) throw std::invalid_argument("gen_weierstrass: n must be >= 16");
  if (!(samples_per_unit > 0.0)) {
    throw std::invalid_argument("gen_weierstrass: samples_per_unit must be positive");
  }

  // Keep terms whose frequency gamma^k stays below Nyquist; anything above
  // would alias and corrupt the dimension of the sampled graph.
  const double nyquist = samples_per_unit / 2.0;
  const int kmax = static_cast<int>(std::floor(std::log(nyquist) / std::log(gamma)));

  TimeSeries out;
  out.rate_hz = rate_hz;
  out.samples.assign(n, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    const double amp = std::pow(gamma, (dimension - 2.0) * k);
    const double freq = 2.0 * std::numbers::pi * std::pow(gamma, k);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / samples_per_unit;
      out.samples[i] += amp * std::cos(freq * t);
    }
  }
  return out;
}

TimeSeries gen_binomial_cascade(double p, int depth, std::uint64_t seed, double rate_hz) {
  if (!(p > 0.5 && p < 1.0)) {
    throw std::invalid_argument("gen_binomial_cascade: p must lie in (0.5,1)");
  }
  if (depth < 1 || depth > 24) {
    throw std::invalid_argument("gen_binomial_cascade: depth must lie in [1,24]");
  }

  std::mt19937_64 rng(seed);
  const std::size_t n = std::size_t{1} << depth;
  std::vector<double> mass{1.0};
  std::vector<double> next;
  next.reserve(n);
  for (int level = 0; level < depth; ++level) {
    next.clear();
    for (double m : mass) {
      const bool heavy_left = (rng() & 1u) != 0;
      const double left = heavy_left ? p : 1.0 - p;
      next.push_back(m * left);
      next.push_back(m * (1.0 - left));
    }
    mass.swap(next);
  }

  TimeSeries out;
  out.rate_hz = rate_hz;
  out.samples = std::move(mass);
  return out;
}

double cascade_mass_exponent(double p, double q) {
  return -std::log(std::pow(p, q) + std::pow(1.0 - p, q)) / std::numbers::ln2;
}

}  // namespace fractalis::synth
