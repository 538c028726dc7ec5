#include "fractalis/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractalis {

void TimeSeries::validate() const {
  if (samples.size() < 2) {
    throw std::invalid_argument("TimeSeries: need at least 2 samples");
  }
  if (!(rate_hz > 0.0)) {
    throw std::invalid_argument("TimeSeries: rate_hz must be positive");
  }
  for (double v : samples) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("TimeSeries: non-finite sample");
    }
  }
}

const TimeSeries& Trial::channel(const std::string& name) const {
  for (const auto& [ch_name, series] : channels) {
    if (ch_name == name) return series;
  }
  throw std::invalid_argument("Trial: missing channel '" + name + "'");
}

bool Trial::has_channel(const std::string& name) const {
  for (const auto& [ch_name, series] : channels) {
    if (ch_name == name) return true;
  }
  return false;
}

void Trial::validate() const {
  if (channels.empty()) {
    throw std::invalid_argument("Trial: no channels");
  }
  const std::size_t n = channels.front().second.size();
  const double rate = channels.front().second.rate_hz;
  for (const auto& [name, series] : channels) {
    series.validate();
    if (series.size() != n || series.rate_hz != rate) {
      throw std::invalid_argument("Trial: channel '" + name + "' length/rate mismatch");
    }
  }
  for (const auto& [dim, rating] : labels) {
    if (!(rating >= 1.0 && rating <= 9.0)) {
      throw std::invalid_argument("Trial: rating for '" + dim + "' outside [1,9]");
    }
  }
}

LineFit least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("least_squares_fit: length mismatch");
  }
  const std::size_t n = xs.size();
  if (n < 2) {
    throw std::invalid_argument("least_squares_fit: need at least 2 points");
  }

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) {
    throw std::invalid_argument("least_squares_fit: degenerate abscissa");
  }

  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy <= 0.0) {
    fit.r_squared = 1.0;  // constant ys fitted exactly by a flat line
  } else {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

SummaryStats summarize(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("summarize: empty input");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("summarize: non-finite value");
    }
  }
  const std::size_t n = values.size();

  SummaryStats s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(n);

  double ssd = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    ssd += d * d;
  }
  s.std_dev = std::sqrt(ssd / static_cast<double>(n));

  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  if (n % 2 == 1) {
    s.median = sorted[n / 2];
  } else {
    s.median = 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  return s;
}

std::vector<std::size_t> window_starts(std::size_t n, std::size_t window, std::size_t hop) {
  if (window == 0 || window > n) {
    throw std::invalid_argument("window_starts: window longer than signal");
  }
  if (hop == 0) {
    throw std::invalid_argument("window_starts: hop must be positive");
  }
  std::vector<std::size_t> starts;
  for (std::size_t start = 0; start + window <= n; start += hop) {
    starts.push_back(start);
  }
  return starts;
}

std::vector<TimeSeries> window_split(const TimeSeries& x, double window_s, double overlap_frac) {
  if (!(overlap_frac >= 0.0 && overlap_frac < 1.0)) {
    throw std::invalid_argument("window_split: overlap_frac must be in [0,1)");
  }
  const auto window = static_cast<std::size_t>(std::llround(window_s * x.rate_hz));
  if (window < 2) {
    throw std::invalid_argument("window_split: window must span at least 2 samples");
  }
  const auto hop =
      static_cast<std::size_t>(std::llround(static_cast<double>(window) * (1.0 - overlap_frac)));
  const auto starts = window_starts(x.size(), window, std::max<std::size_t>(hop, 1));

  std::vector<TimeSeries> out;
  out.reserve(starts.size());
  for (std::size_t start : starts) {
    TimeSeries w;
    w.rate_hz = x.rate_hz;
    w.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     x.samples.begin() + static_cast<std::ptrdiff_t>(start + window));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace fractalis
