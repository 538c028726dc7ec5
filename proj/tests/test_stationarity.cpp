#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/stationarity.hpp"
#include "fractalis/synth.hpp"

using namespace fractalis;
using namespace fractalis::stationarity;

TEST_SUITE("stationarity") {

TEST_CASE("large-sample 5% critical value matches the published constant") {
  const TimeSeries x = synth::gen_white_noise(100000, 1);
  const AdfResult res = adf_test(x, 0);
  CHECK(std::abs(res.critical_values.at(0.05) - (-2.86)) < 0.01);
  CHECK(res.critical_values.at(0.01) < res.critical_values.at(0.05));
  CHECK(res.critical_values.at(0.05) < res.critical_values.at(0.10));
}

TEST_CASE("white noise rejects the unit root") {
  int rejections = 0;
  const int n_seeds = 25;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const TimeSeries x = synth::gen_white_noise(2000, static_cast<std::uint64_t>(seed));
    if (adf_test(x).reject_unit_root_at_5pct) ++rejections;
  }
  CHECK(rejections >= 24);  // >= 95%
}

TEST_CASE("random walks fail to reject the unit root") {
  int rejections = 0;
  const int n_seeds = 25;
  for (int seed = 0; seed < n_seeds; ++seed) {
    const TimeSeries x = synth::gen_fbm(0.5, 2000, static_cast<std::uint64_t>(seed));
    if (adf_test(x).reject_unit_root_at_5pct) ++rejections;
  }
  CHECK(rejections <= 2);  // fail-to-reject >= 90%
}

TEST_CASE("statistic is scale invariant") {
  const TimeSeries x = synth::gen_white_noise(1024, 5);
  TimeSeries scaled = x;
  for (auto& v : scaled.samples) v *= 1234.5;
  const AdfResult a = adf_test(x);
  const AdfResult b = adf_test(scaled);
  CHECK(std::abs(a.statistic - b.statistic) < 1e-9);
  CHECK(a.lags_used == b.lags_used);
}

TEST_CASE("constant series is rejected as singular") {
  TimeSeries flat;
  flat.rate_hz = 1.0;
  flat.samples.assign(200, 4.0);
  CHECK_THROWS_AS(adf_test(flat), std::runtime_error);
}

TEST_CASE("short series is rejected") {
  TimeSeries x = synth::gen_white_noise(32, 1);
  CHECK_THROWS_AS(adf_test(x), std::invalid_argument);
}

TEST_CASE("rejection evidence weakens as fbm roughness decreases") {
  // anti-persistent increments look mean-reverting inside short windows
  std::vector<int> rejections;
  for (double hurst : {0.2, 0.5, 0.8}) {
    int count = 0;
    for (int seed = 0; seed < 30; ++seed) {
      const TimeSeries x = synth::gen_fbm(hurst, 512, static_cast<std::uint64_t>(seed));
      if (adf_test(x).reject_unit_root_at_5pct) ++count;
    }
    rejections.push_back(count);
  }
  CHECK(rejections[0] >= rejections[2]);
}

TEST_CASE("rolling window bookkeeping and verdicts") {
  const TimeSeries walk = synth::gen_fbm(0.5, 4000, 9);
  const RollingAdf roll = rolling_adf(walk, 500, 250);
  CHECK(roll.starts.size() == (4000 - 500) / 250 + 1);
  std::size_t rejections = 0;
  for (const auto& r : roll.results) rejections += r.reject_unit_root_at_5pct ? 1 : 0;
  CHECK(rejections <= roll.results.size() / 5);

  const TimeSeries noise = synth::gen_white_noise(4000, 9);
  const RollingAdf roll2 = rolling_adf(noise, 128, 64);
  std::size_t rejections2 = 0;
  for (const auto& r : roll2.results) rejections2 += r.reject_unit_root_at_5pct ? 1 : 0;
  CHECK(rejections2 * 10 >= roll2.results.size() * 9);
}

}  // TEST_SUITE
