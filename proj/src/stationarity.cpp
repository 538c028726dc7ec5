#include "fractalis/stationarity.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fractalis::stationarity {

namespace {

// MacKinnon (2010) response-surface coefficients, ADF tau, constant only:
// cv = b0 + b1/T + b2/T^2 + b3/T^3.
struct RsRow {
  double level;
  double b0, b1, b2, b3;
};

constexpr RsRow kMacKinnonC[] = {
    {0.01, -3.43035, -6.5393, -16.786, -79.433},
    {0.05, -2.86154, -2.8903, -4.234, -40.040},
    {0.10, -2.56677, -1.5384, -2.809, 0.0},
};

double critical_value(const RsRow& row, std::size_t nobs) {
  const double t = static_cast<double>(nobs);
  return row.b0 + row.b1 / t + row.b2 / (t * t) + row.b3 / (t * t * t);
}

struct OlsFit {
  Eigen::VectorXd beta;
  double rss{0.0};
  double se_x_level{0.0};  // standard error of the level coefficient
  std::size_t nobs{0};
};

// Regression rows for target dx[i], i in [first_i, last_i]; regressors are
// [1, x[i], dx[i-1..i-p]].
OlsFit fit_adf_regression(const std::vector<double>& x, const std::vector<double>& dx,
                          int p, std::size_t first_i, std::size_t last_i) {
  const std::size_t nobs = last_i - first_i + 1;
  const std::size_t k = static_cast<std::size_t>(p) + 2;
  if (nobs < k + 2) throw std::invalid_argument("adf_test: too few observations for lag order");

  Eigen::MatrixXd X(nobs, k);
  Eigen::VectorXd y(nobs);
  for (std::size_t r = 0; r < nobs; ++r) {
    const std::size_t i = first_i + r;
    y(static_cast<Eigen::Index>(r)) = dx[i];
    X(static_cast<Eigen::Index>(r), 0) = 1.0;
    X(static_cast<Eigen::Index>(r), 1) = x[i];
    for (int j = 1; j <= p; ++j) {
      X(static_cast<Eigen::Index>(r), 1 + j) = dx[i - static_cast<std::size_t>(j)];
    }
  }

  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw std::runtime_error("adf_test: singular regression");
  }

  OlsFit fit;
  fit.nobs = nobs;
  fit.beta = ldlt.solve(X.transpose() * y);
  const Eigen::VectorXd resid = y - X * fit.beta;
  fit.rss = resid.squaredNorm();

  const double sigma2 = fit.rss / static_cast<double>(nobs - k);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  e1(1) = 1.0;
  const double var_level = sigma2 * ldlt.solve(e1)(1);
  if (!(var_level > 0.0)) throw std::runtime_error("adf_test: singular regression");
  fit.se_x_level = std::sqrt(var_level);
  return fit;
}

double aic_of(const OlsFit& fit, int p) {
  const double nobs = static_cast<double>(fit.nobs);
  const double k = static_cast<double>(p + 2);
  return nobs * std::log(fit.rss / nobs) + 2.0 * k;
}

}  // namespace

AdfResult adf_test(const TimeSeries& x, int max_lags) {
  x.validate();
  const std::size_t n = x.size();
  if (n < 50) throw std::invalid_argument("adf_test: need at least 50 samples");

  // guard against a (near-)constant series before touching the regression
  double mean = 0.0;
  for (double v : x.samples) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : x.samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  if (var <= 1e-24 * (1.0 + mean * mean)) {
    throw std::runtime_error("adf_test: constant series");
  }

  std::vector<double> dx(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) dx[i] = x.samples[i + 1] - x.samples[i];
  const std::size_t n_dx = dx.size();

  int p = 0;
  if (max_lags >= 0) {
    p = max_lags;
  } else {
    // Schwert bound, then AIC over a common estimation sample
    int pmax = static_cast<int>(
        std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    pmax = std::min<int>(pmax, static_cast<int>(n_dx / 2) - 2);
    pmax = std::max(pmax, 0);

    double best_aic = std::numeric_limits<double>::infinity();
    const std::size_t first_i = static_cast<std::size_t>(pmax);
    for (int cand = 0; cand <= pmax; ++cand) {
      const OlsFit fit = fit_adf_regression(x.samples, dx, cand, first_i, n_dx - 1);
      const double aic = aic_of(fit, cand);
      if (aic < best_aic) {
        best_aic = aic;
        p = cand;
      }
    }
  }

  if (static_cast<std::size_t>(p) + 4 > n_dx) {
    throw std::invalid_argument("adf_test: lag order too large for series");
  }
  const OlsFit fit =
      fit_adf_regression(x.samples, dx, p, static_cast<std::size_t>(p), n_dx - 1);

  AdfResult res;
  res.lags_used = p;
  res.statistic = fit.beta(1) / fit.se_x_level;
  for (const RsRow& row : kMacKinnonC) {
    res.critical_values[row.level] = critical_value(row, fit.nobs);
  }
  res.reject_unit_root_at_5pct = res.statistic < res.critical_values.at(0.05);
  return res;
}

RollingAdf rolling_adf(const TimeSeries& x, std::size_t window_samples, std::size_t hop) {
  if (window_samples < 50) throw std::invalid_argument("rolling_adf: window must be >= 50");
  if (hop == 0) throw std::invalid_argument("rolling_adf: hop must be positive");

  RollingAdf out;
  out.starts = window_starts(x.size(), window_samples, hop);
  out.results.reserve(out.starts.size());
  for (std::size_t start : out.starts) {
    TimeSeries w;
    w.rate_hz = x.rate_hz;
    w.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     x.samples.begin() + static_cast<std::ptrdiff_t>(start + window_samples));
    out.results.push_back(adf_test(w));
  }
  return out;
}

}  // namespace fractalis::stationarity
