#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/dsp.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;
using namespace fractalis::dsp;

namespace {

TimeSeries sinusoid(double freq_hz, double rate_hz, std::size_t n, double amp = 1.0) {
  TimeSeries x;
  x.rate_hz = rate_hz;
  x.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x.samples[i] = amp * std::sin(2.0 * std::numbers::pi * freq_hz *
                                  static_cast<double>(i) / rate_hz);
  }
  return x;
}

double rms_mid(const std::vector<double>& v) {
  const std::size_t lo = v.size() / 4, hi = 3 * v.size() / 4;
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += v[i] * v[i];
  return std::sqrt(acc / static_cast<double>(hi - lo));
}

}  // namespace

TEST_SUITE("dsp") {

TEST_CASE("band edges sit at -3 dB") {
  const FilterRealization filt = design_butterworth_bandpass(10, 8.0, 13.0, 128.0);
  CHECK(filt.magnitude_db(8.0, 128.0) == doctest::Approx(-3.0103).epsilon(0.06));
  CHECK(filt.magnitude_db(13.0, 128.0) == doctest::Approx(-3.0103).epsilon(0.06));
  CHECK(std::abs(filt.magnitude_db(8.0, 128.0) + 3.0) < 0.2);
  CHECK(std::abs(filt.magnitude_db(13.0, 128.0) + 3.0) < 0.2);
}

TEST_CASE("mid-band gain is 0 dB") {
  const FilterRealization filt = design_butterworth_bandpass(10, 8.0, 13.0, 128.0);
  const double center = std::sqrt(8.0 * 13.0);
  CHECK(std::abs(filt.magnitude_db(center, 128.0)) < 0.1);
}

TEST_CASE("stopband attenuation exceeds 40 dB at twice the upper edge") {
  const FilterRealization filt = design_butterworth_bandpass(10, 8.0, 13.0, 128.0);
  CHECK(filt.magnitude_db(26.0, 128.0) < -40.0);
}

TEST_CASE("every designed section is stable") {
  for (const BandSpec& band : {BandSpec::alpha(), BandSpec::beta(), BandSpec::gamma()}) {
    const FilterRealization filt =
        design_butterworth_bandpass(10, band.lo_hz, band.hi_hz, 128.0);
    CHECK(filt.sections.size() == 10);
    CHECK(filt.max_pole_modulus() < 1.0);
  }
}

TEST_CASE("band outside Nyquist is rejected") {
  CHECK_THROWS_AS(design_butterworth_bandpass(10, 30.0, 70.0, 128.0), std::invalid_argument);
  CHECK_THROWS_AS(design_butterworth_bandpass(10, 13.0, 8.0, 128.0), std::invalid_argument);
}

TEST_CASE("passband sinusoid survives zero-phase filtering") {
  const TimeSeries x = sinusoid(10.0, 128.0, 4096);
  const TimeSeries y = filter_band(x, BandSpec::alpha());
  REQUIRE(y.size() == x.size());
  const double in_rms = rms_mid(x.samples);
  const double out_rms = rms_mid(y.samples);
  CHECK(out_rms / in_rms == doctest::Approx(1.0).epsilon(0.02));

  // zero phase: the cross-correlation peak is at lag 0
  double best = -1e300;
  int best_lag = -100;
  for (int lag = -20; lag <= 20; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 100; i + 100 < x.size(); ++i) {
      acc += x.samples[i] * y.samples[static_cast<std::size_t>(static_cast<int>(i) + lag)];
    }
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  CHECK(best_lag == 0);
}

TEST_CASE("out-of-band sinusoid is strongly attenuated") {
  const TimeSeries x = sinusoid(50.0, 128.0, 4096);
  const TimeSeries y = filter_band(x, BandSpec::alpha());
  const double ratio = rms_mid(y.samples) / rms_mid(x.samples);
  CHECK(20.0 * std::log10(ratio) < -60.0);
}

TEST_CASE("raw band is the identity") {
  const TimeSeries x = synth::gen_white_noise(1024, 3);
  const TimeSeries y = filter_band(x, BandSpec::raw());
  CHECK(x.samples == y.samples);
}

TEST_CASE("too-short signals are rejected by the zero-phase filter") {
  const TimeSeries x = sinusoid(10.0, 128.0, 60);
  CHECK_THROWS_AS(filter_band(x, BandSpec::alpha()), std::invalid_argument);
}

TEST_CASE("welch spectrum of white noise is flat") {
  std::vector<double> mean_psd(64, 0.0);
  const int n_seeds = 20;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const TimeSeries x = synth::gen_white_noise(1 << 14, static_cast<std::uint64_t>(seed));
    const std::vector<double> psd = welch_psd(x, 64);
    for (std::size_t b = 0; b < 64; ++b) mean_psd[b] += psd[b];
  }
  const auto [mn, mx] = std::minmax_element(mean_psd.begin(), mean_psd.end());
  CHECK(*mx / *mn < 3.0);
}

TEST_CASE("pure tone dominates the band containing it") {
  const TimeSeries x = sinusoid(16.0, 128.0, 1 << 13);
  const std::vector<double> psd = welch_psd(x, 64);
  double total = 0.0;
  for (double p : psd) total += p;
  // 16 Hz lies in band 16 of [0,64); the Hann window leaks one raw bin
  // into the neighboring band, capping the captured share at 5/6
  const std::size_t arg_max = static_cast<std::size_t>(
      std::max_element(psd.begin(), psd.end()) - psd.begin());
  CHECK(arg_max == 16);
  CHECK(psd[16] / total > 0.8);
}

TEST_CASE("welch satisfies Parseval within 5%") {
  const TimeSeries x = synth::gen_white_noise(1 << 14, 77);
  const WelchSpectrum spec = welch_periodogram(x);
  const double df = x.rate_hz / 256.0;
  double integral = 0.0;
  for (double p : spec.psd) integral += p * df;
  double var = 0.0, mean = 0.0;
  for (double v : x.samples) mean += v;
  mean /= static_cast<double>(x.size());
  for (double v : x.samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  CHECK(integral == doctest::Approx(var).epsilon(0.05));
}

TEST_CASE("welch psd is non-negative and offset moves only the DC band") {
  const TimeSeries x = synth::gen_white_noise(4096, 13);
  TimeSeries shifted = x;
  for (auto& v : shifted.samples) v += 40.0;
  const std::vector<double> a = welch_psd(x, 64);
  const std::vector<double> b = welch_psd(shifted, 64);
  for (double p : a) CHECK(p >= 0.0);
  CHECK(b[0] > a[0]);
  for (std::size_t band = 1; band < 64; ++band) {
    CHECK(b[band] == doctest::Approx(a[band]).epsilon(1e-6));
  }
}

TEST_CASE("welch feature scaling is quadratic in amplitude") {
  const TimeSeries x = synth::gen_white_noise(2048, 21);
  TimeSeries doubled = x;
  for (auto& v : doubled.samples) v *= 2.0;
  const std::vector<double> a = welch_psd(x, 64);
  const std::vector<double> b = welch_psd(doubled, 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(b[i] == doctest::Approx(4.0 * a[i]).epsilon(1e-12));
}

}  // TEST_SUITE
