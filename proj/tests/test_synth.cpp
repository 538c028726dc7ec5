#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/fluctuation.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;

namespace {

double lag1_autocorr(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = v[i] - mean;
    den += d * d;
    if (i + 1 < v.size()) num += d * (v[i + 1] - mean);
  }
  return num / den;
}

// brute-force box counting over the normalized graph, the independent
// oracle for the construction dimension
double box_counting_dimension(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  const auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *mn_it, span = *mx_it - *mn_it;

  std::vector<double> log_inv_eps, log_count;
  for (int k = 4; k <= 9; ++k) {
    const std::size_t cols = std::size_t{1} << k;
    const double eps = 1.0 / static_cast<double>(cols);
    std::size_t boxes = 0;
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i0 = c * n / cols;
      const std::size_t i1 = std::min(n, (c + 1) * n / cols + 1);  // share the border sample
      double cmin = 1e300, cmax = -1e300;
      for (std::size_t i = i0; i < i1; ++i) {
        const double y = (samples[i] - lo) / span;
        cmin = std::min(cmin, y);
        cmax = std::max(cmax, y);
      }
      const auto b0 = static_cast<long>(std::floor(cmin / eps));
      const auto b1 = static_cast<long>(std::floor(std::min(cmax, 1.0 - 1e-12) / eps));
      boxes += static_cast<std::size_t>(b1 - b0 + 1);
    }
    log_inv_eps.push_back(std::log(static_cast<double>(cols)));
    log_count.push_back(std::log(static_cast<double>(boxes)));
  }
  return least_squares_fit(log_inv_eps, log_count).slope;
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("fgn at H=0.5 is white: lag-1 autocorrelation within 3/sqrt(n)") {
  const std::size_t n = 1 << 14;
  int inside = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const TimeSeries x = synth::gen_fgn(0.5, n, seed);
    if (std::abs(lag1_autocorr(x.samples)) < 3.0 / std::sqrt(static_cast<double>(n))) ++inside;
  }
  CHECK(inside >= 38);  // 95% of seeds
}

TEST_CASE("fgn at H=0.8 matches the closed-form lag-1 autocovariance") {
  const double expected = std::pow(2.0, 2.0 * 0.8 - 1.0) - 1.0;  // 0.51572
  const TimeSeries x = synth::gen_fgn(0.8, 1 << 14, 2024);
  CHECK(std::abs(lag1_autocorr(x.samples) - expected) < 0.02);
}

TEST_CASE("fgn is deterministic per seed") {
  const TimeSeries a = synth::gen_fgn(0.7, 512, 99);
  const TimeSeries b = synth::gen_fgn(0.7, 512, 99);
  CHECK(a.samples == b.samples);
  const TimeSeries c = synth::gen_fgn(0.7, 512, 100);
  CHECK(a.samples != c.samples);
}

TEST_CASE("fgn rejects invalid hurst") {
  CHECK_THROWS_AS(synth::gen_fgn(0.0, 256, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_fgn(1.0, 256, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_fgn(0.5, 8, 1), std::invalid_argument);
}

TEST_CASE("fbm at H=0.5 has random-walk variance growth") {
  // var(x[n]) = n; the end-point square is chi^2_1 per path, so the 20%
  // window needs a couple hundred paths to be a meaningful check
  const std::size_t n = 1 << 12;
  double ratio_sum = 0.0;
  const int n_seeds = 200;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const TimeSeries x = synth::gen_fbm(0.5, n, static_cast<std::uint64_t>(seed));
    const double last = x.samples.back();
    ratio_sum += last * last / static_cast<double>(n);
  }
  CHECK(ratio_sum / n_seeds == doctest::Approx(1.0).epsilon(0.2));

  // increments are unit variance
  double var = 0.0;
  const TimeSeries g = synth::gen_fgn(0.5, 1 << 14, 1);
  for (double v : g.samples) var += v * v;
  var /= static_cast<double>(g.size());
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("fbm starts at the first increment and differences back to fgn") {
  const TimeSeries inc = synth::gen_fgn(0.6, 256, 5);
  const TimeSeries walk = synth::gen_fbm(0.6, 256, 5);
  CHECK(walk.samples.front() == inc.samples.front());
  for (std::size_t i = 1; i < walk.size(); ++i) {
    CHECK(walk.samples[i] - walk.samples[i - 1] == doctest::Approx(inc.samples[i]).epsilon(1e-12));
  }
}

TEST_CASE("weierstrass stays within the geometric amplitude bound") {
  const double d = 1.5, gamma = 5.0;
  const TimeSeries w = synth::gen_weierstrass(d, gamma, 4096, 4096.0);
  const double bound = 1.0 / (1.0 - std::pow(gamma, d - 2.0));
  for (double v : w.samples) CHECK(std::abs(v) <= bound + 1e-9);
}

TEST_CASE("weierstrass box-counting dimension tracks the construction parameter") {
  for (double d : {1.3, 1.5, 1.8}) {
    const TimeSeries w = synth::gen_weierstrass(d, 3.0, 8192, 8192.0);
    CHECK(box_counting_dimension(w.samples) == doctest::Approx(d).epsilon(0.12));
  }
}

TEST_CASE("weierstrass rejects invalid parameters") {
  CHECK_THROWS_AS(synth::gen_weierstrass(0.9, 5.0, 1024, 1024.0), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_weierstrass(2.0, 5.0, 1024, 1024.0), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_weierstrass(1.5, 0.8, 1024, 1024.0), std::invalid_argument);
}

TEST_CASE("cascade conserves total mass and respects its length") {
  const TimeSeries c = synth::gen_binomial_cascade(0.75, 16, 1);
  CHECK(c.size() == std::size_t{1} << 16);
  double total = 0.0;
  for (double v : c.samples) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  for (double v : c.samples) CHECK(v > 0.0);
}

TEST_CASE("cascade near p=0.5 approaches the uniform series") {
  const TimeSeries c = synth::gen_binomial_cascade(0.500001, 10, 3);
  const double uniform = 1.0 / 1024.0;
  for (double v : c.samples) CHECK(v == doctest::Approx(uniform).epsilon(1e-3));
}

TEST_CASE("cascade analytic mass exponent sanity") {
  CHECK(synth::cascade_mass_exponent(0.75, 0.0) == doctest::Approx(-1.0));
  // tau(1) = 0: the measure itself is conserved
  CHECK(synth::cascade_mass_exponent(0.75, 1.0) == doctest::Approx(0.0));
  CHECK(synth::cascade_mass_exponent(0.75, 2.0) == doctest::Approx(-std::log(0.625) / std::log(2.0)));
}

TEST_CASE("dfa recovers H for fgn and H+1 for fbm across the H range") {
  namespace fl = fractalis::fluctuation;
  const std::size_t n = 1 << 14;
  const auto grid = fl::ScaleGrid::default_for(n);
  for (double hurst : {0.3, 0.5, 0.7, 0.9}) {
    double mean_fgn = 0.0, mean_fbm = 0.0;
    for (int seed = 0; seed < 20; ++seed) {
      mean_fgn += fl::dfa(synth::gen_fgn(hurst, n, static_cast<std::uint64_t>(seed)), grid).hurst;
      mean_fbm += fl::dfa(synth::gen_fbm(hurst, n, static_cast<std::uint64_t>(seed)), grid).hurst;
    }
    CHECK(std::abs(mean_fgn / 20 - hurst) < 0.05);
    CHECK(std::abs(mean_fbm / 20 - (hurst + 1.0)) < 0.1);
  }
}

TEST_CASE("cascade rejects invalid parameters") {
  CHECK_THROWS_AS(synth::gen_binomial_cascade(0.4, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(synth::gen_binomial_cascade(0.75, 25, 1), std::invalid_argument);
}

TEST_CASE("generator spec dispatch matches the direct calls") {
  synth::GeneratorSpec spec;
  spec.kind = synth::kind_from_name("fbm");
  spec.hurst = 0.6;
  spec.length = 256;
  spec.seed = 5;
  CHECK(synth::generate(spec).samples == synth::gen_fbm(0.6, 256, 5).samples);

  spec.kind = synth::Kind::binomial_cascade;
  spec.depth = 8;
  CHECK(synth::generate(spec).samples == synth::gen_binomial_cascade(0.75, 8, 5).samples);

  spec.length = 8;
  spec.kind = synth::Kind::white_noise;
  CHECK_THROWS_AS(synth::generate(spec), std::invalid_argument);  // too short
  spec.kind = synth::Kind::binomial_cascade;
  spec.depth = 3;
  CHECK_THROWS_AS(synth::generate(spec), std::invalid_argument);  // 2^3 < 16
  CHECK_THROWS_AS(synth::kind_from_name("levy"), std::invalid_argument);
}

}  // TEST_SUITE
