#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstring>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/features.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;
using namespace fractalis::features;

namespace {

TimeSeries ramp_60s() {
  TimeSeries x;
  x.rate_hz = 128.0;
  x.samples.resize(60 * 128);
  for (std::size_t i = 0; i < x.samples.size(); ++i) x.samples[i] = 0.001 * static_cast<double>(i);
  return x;
}

Trial make_trial(const std::vector<std::string>& names, double hurst, std::uint64_t seed,
                 std::size_t n = 60 * 128) {
  Trial t;
  t.subject_id = "s01";
  t.labels = {{"valence", 6.0}, {"arousal", 4.0}};
  for (std::size_t c = 0; c < names.size(); ++c) {
    t.channels.emplace_back(names[c], synth::gen_fgn(hurst, n, seed + c));
  }
  return t;
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("mfd features: 90 values from a 60 s trial channel") {
  const FeatureVector fv = extract_mfd_features(synth::gen_fgn(0.3, 60 * 128, 1));
  REQUIRE(fv.values.size() == 90);
  REQUIRE(fv.names.size() == 90);
  CHECK(fv.names[0].rfind("mfd_mean_", 0) == 0);
  CHECK(fv.names[30].rfind("mfd_median_", 0) == 0);
  CHECK(fv.names[60].rfind("mfd_std_", 0) == 0);
  // scale positions span up to max_scale 274 minus the slope window
  CHECK(fv.names[29] == "mfd_mean_s268");
}

TEST_CASE("mfd features of a ramp: means near 1, stds near 0") {
  const FeatureVector fv = extract_mfd_features(ramp_60s());
  for (std::size_t i = 0; i < 30; ++i) CHECK(fv.values[i] == doctest::Approx(1.0).epsilon(0.05));
  for (std::size_t i = 60; i < 90; ++i) CHECK(std::abs(fv.values[i]) < 0.01);
}

TEST_CASE("identical tiled windows give exactly zero std features") {
  // period = hop makes consecutive windows bytewise identical
  TimeSeries x;
  x.rate_hz = 128.0;
  const std::size_t period = 960;
  const TimeSeries base = synth::gen_white_noise(period, 5);
  x.samples.resize(1920 + 960);
  for (std::size_t i = 0; i < x.samples.size(); ++i) x.samples[i] = base.samples[i % period];
  const FeatureVector fv = extract_mfd_features(x);
  for (std::size_t i = 60; i < 90; ++i) CHECK(fv.values[i] == 0.0);
}

TEST_CASE("mfdfa features: 30 values, flat h for monofractal input") {
  const FeatureVector fv = extract_mfdfa_features(synth::gen_fgn(0.7, 8192, 3));
  REQUIRE(fv.values.size() == 30);
  double h_min = 1e300, h_max = -1e300;
  for (std::size_t i = 0; i < 15; ++i) {
    h_min = std::min(h_min, fv.values[i]);
    h_max = std::max(h_max, fv.values[i]);
  }
  CHECK(h_max - h_min < 0.15);
}

TEST_CASE("mfdfa features honor the fraction parameter") {
  const TimeSeries x = synth::gen_fgn(0.5, 16384, 9);
  const FeatureVector half = extract_mfdfa_features(x);
  MfdfaFeatureOptions full_opt;
  full_opt.fraction = 1.0;
  const FeatureVector full = extract_mfdfa_features(x, full_opt);
  CHECK(half.values.size() == full.values.size());
  for (double v : full.values) CHECK(std::isfinite(v));

  MfdfaFeatureOptions tiny;
  tiny.fraction = 0.05;
  CHECK_THROWS_AS(extract_mfdfa_features(x, tiny), std::invalid_argument);
}

TEST_CASE("hfd features: 7 windows on a 60 s signal") {
  const FeatureVector ramp_fv = extract_hfd_features(ramp_60s());
  REQUIRE(ramp_fv.values.size() == 7);
  for (double v : ramp_fv.values) CHECK(v == doctest::Approx(1.0).epsilon(0.05));

  const FeatureVector noise_fv = extract_hfd_features(synth::gen_white_noise(60 * 128, 2));
  REQUIRE(noise_fv.values.size() == 7);
  for (double v : noise_fv.values) CHECK(std::abs(v - 2.0) < 0.15);
}

TEST_CASE("psd features: 64 values, quadratic in amplitude") {
  const TimeSeries x = synth::gen_white_noise(4096, 4);
  const FeatureVector fv = extract_psd_features(x);
  REQUIRE(fv.values.size() == 64);
  TimeSeries doubled = x;
  for (auto& v : doubled.samples) v *= 2.0;
  const FeatureVector fv2 = extract_psd_features(doubled);
  for (std::size_t i = 0; i < 64; ++i) {
    CHECK(fv2.values[i] == doctest::Approx(4.0 * fv.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("per-trial extraction concatenates channel-major") {
  const Trial trial = make_trial({"F3", "F4"}, 0.5, 10, 8192);
  const FeatureVector fv =
      extract_trial(trial, Family::mfdfa, dsp::BandSpec::raw(), ChannelSet::custom({"F3", "F4"}));
  REQUIRE(fv.values.size() == 60);
  CHECK(fv.names[0].rfind("F3.raw.", 0) == 0);
  CHECK(fv.names[30].rfind("F4.raw.", 0) == 0);

  // permuting the channel list permutes the blocks
  const FeatureVector swapped =
      extract_trial(trial, Family::mfdfa, dsp::BandSpec::raw(), ChannelSet::custom({"F4", "F3"}));
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(swapped.values[i] == fv.values[30 + i]);
    CHECK(swapped.values[30 + i] == fv.values[i]);
  }
}

TEST_CASE("full left montage dimensions") {
  const ChannelSet left = ChannelSet::left();
  REQUIRE(left.channels.size() == 12);
  const Trial trial = make_trial(left.channels, 0.4, 20, 60 * 128);
  const FeatureVector hfd = extract_trial(trial, Family::hfd, dsp::BandSpec::raw(), left);
  CHECK(hfd.values.size() == 84);  // 7 x 12
  const FeatureVector mfd = extract_trial(trial, Family::mfd, dsp::BandSpec::raw(), left);
  CHECK(mfd.values.size() == 1080);  // 90 x 12
}

TEST_CASE("missing channel is named in the error") {
  const Trial trial = make_trial({"F3"}, 0.5, 1, 4096);
  CHECK_THROWS_WITH_AS(
      extract_trial(trial, Family::psd, dsp::BandSpec::raw(), ChannelSet::custom({"F3", "Oz"})),
      doctest::Contains("Oz"), std::invalid_argument);
  CHECK_THROWS_AS(
      extract_trial(trial, Family::psd, dsp::BandSpec::raw(), ChannelSet::custom({})),
      std::invalid_argument);
}

TEST_CASE("extraction is deterministic") {
  const Trial trial = make_trial({"F3", "F4"}, 0.6, 30, 8192);
  const FeatureVector a =
      extract_trial(trial, Family::psd, dsp::BandSpec::alpha(), ChannelSet::custom({"F3", "F4"}));
  const FeatureVector b =
      extract_trial(trial, Family::psd, dsp::BandSpec::alpha(), ChannelSet::custom({"F3", "F4"}));
  REQUIRE(a.values.size() == b.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0);
}

TEST_CASE("family helpers") {
  CHECK(family_dimension(Family::mfd) == 90);
  CHECK(family_dimension(Family::mfdfa) == 30);
  CHECK(family_dimension(Family::hfd) == 7);
  CHECK(family_dimension(Family::psd) == 64);
  CHECK(family_from_name("mfdfa") == Family::mfdfa);
  CHECK_THROWS_AS(family_from_name("wavelet"), std::invalid_argument);
}

}  // TEST_SUITE
