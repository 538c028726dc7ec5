#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "fractalis/core.hpp"

namespace fractalis::stationarity {

struct AdfResult {
  double statistic{0.0};
  int lags_used{0};
  // significance level (0.01 / 0.05 / 0.10) -> critical value
  std::map<double, double> critical_values;
  bool reject_unit_root_at_5pct{false};
};

// Augmented Dickey-Fuller unit-root test with constant (no trend):
//   dx_t = alpha + gamma*x_{t-1} + sum_i beta_i dx_{t-i} + e_t.
// The statistic is the t-ratio of gamma. max_lags < 0 selects the Schwert
// bound floor(12*(N/100)^{1/4}) pruned by AIC over a common sample.
// Critical values follow the MacKinnon response-surface approximation for
// the constant-only case. Throws on constant input or length < 50.
AdfResult adf_test(const TimeSeries& x, int max_lags = -1);

struct RollingAdf {
  std::vector<std::size_t> starts;
  std::vector<AdfResult> results;
};

RollingAdf rolling_adf(const TimeSeries& x, std::size_t window_samples, std::size_t hop);

}  // namespace fractalis::stationarity
