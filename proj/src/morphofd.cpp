#include "fractalis/morphofd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractalis::morphofd {

namespace {

// One unit-radius pass of a flat running extremum with replicated edges.
void unit_pass(const std::vector<double>& in, std::vector<double>& out, bool dilate) {
  const std::size_t n = in.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double a = in[t > 0 ? t - 1 : 0];
    const double b = in[t];
    const double c = in[t + 1 < n ? t + 1 : n - 1];
    out[t] = dilate ? std::max({a, b, c}) : std::min({a, b, c});
  }
}

std::vector<double> log_range(const std::vector<int>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(static_cast<double>(v[i]));
  return out;
}

DimensionEstimate estimate_from_fit(const std::vector<double>& log_s,
                                    const std::vector<double>& log_a) {
  DimensionEstimate est;
  est.fit = least_squares_fit(log_s, log_a);
  est.raw = 2.0 - est.fit.slope;
  est.dimension = std::clamp(est.raw, 1.0, 2.0);
  return est;
}

}  // namespace

CoverProfile multiscale_cover(const TimeSeries& x, int max_scale) {
  x.validate();
  const std::size_t n = x.size();
  if (max_scale < 1 || static_cast<std::size_t>(max_scale) > n / 2) {
    throw std::invalid_argument("multiscale_cover: max_scale outside [1, n/2]");
  }

  std::vector<double> dil = x.samples;
  std::vector<double> ero = x.samples;
  std::vector<double> tmp(n);

  CoverProfile cover;
  cover.scales.reserve(static_cast<std::size_t>(max_scale));
  cover.areas.reserve(static_cast<std::size_t>(max_scale));
  for (int s = 1; s <= max_scale; ++s) {
    unit_pass(dil, tmp, true);
    dil.swap(tmp);
    unit_pass(ero, tmp, false);
    ero.swap(tmp);

    double area = 0.0;
    for (std::size_t t = 0; t < n; ++t) area += dil[t] - ero[t];
    if (s == 1 && area <= 0.0) {
      throw std::runtime_error("multiscale_cover: degenerate flat signal");
    }
    cover.scales.push_back(s);
    cover.areas.push_back(area);
  }
  return cover;
}

DimensionEstimate fractal_dimension_global(const CoverProfile& cover, int s_lo, int s_hi) {
  if (cover.scales.empty()) throw std::invalid_argument("fractal_dimension_global: empty cover");
  const int s_min = cover.scales.front();
  const int s_max = cover.scales.back();
  if (s_lo < s_min || s_hi > s_max || s_hi - s_lo + 1 < 3) {
    throw std::invalid_argument("fractal_dimension_global: fit range needs >= 3 scales inside the grid");
  }

  std::vector<double> log_s, log_a;
  for (std::size_t i = 0; i < cover.scales.size(); ++i) {
    const int s = cover.scales[i];
    if (s < s_lo || s > s_hi) continue;
    if (cover.areas[i] <= 0.0) {
      throw std::runtime_error("fractal_dimension_global: flat segment");
    }
    log_s.push_back(std::log(static_cast<double>(s)));
    log_a.push_back(std::log(cover.areas[i]));
  }
  return estimate_from_fit(log_s, log_a);
}

LocalDimensions local_dimensions(const CoverProfile& cover, int w) {
  if (w < 3) throw std::invalid_argument("local_dimensions: slope window must be >= 3");
  const int s_count = static_cast<int>(cover.scales.size());
  if (s_count < w) throw std::invalid_argument("local_dimensions: fewer scales than slope window");

  const std::vector<double> log_s_all = log_range(cover.scales);
  std::vector<double> log_a_all(cover.areas.size());
  for (std::size_t i = 0; i < cover.areas.size(); ++i) {
    if (cover.areas[i] <= 0.0) throw std::runtime_error("local_dimensions: flat segment");
    log_a_all[i] = std::log(cover.areas[i]);
  }

  LocalDimensions out;
  for (int i = 0; i + w <= s_count; ++i) {
    std::vector<double> ls(log_s_all.begin() + i, log_s_all.begin() + i + w);
    std::vector<double> la(log_a_all.begin() + i, log_a_all.begin() + i + w);
    const DimensionEstimate est = estimate_from_fit(ls, la);
    out.scales.push_back(cover.scales[static_cast<std::size_t>(i)]);
    out.dimension.push_back(est.dimension);
    out.raw.push_back(est.raw);
  }
  return out;
}

Fractogram fractogram(const TimeSeries& x, const FractogramOptions& opt) {
  if (opt.slope_window < 3) throw std::invalid_argument("fractogram: slope window must be >= 3");
  if (opt.max_scale < opt.slope_window) {
    throw std::invalid_argument("fractogram: max_scale must be >= slope window");
  }
  const auto starts = window_starts(x.size(), opt.window_samples, opt.hop_samples);

  Fractogram fg;
  fg.slope_window_w = opt.slope_window;
  fg.times = starts;
  const int local_count = opt.max_scale - opt.slope_window + 1;
  fg.scales.resize(static_cast<std::size_t>(local_count));
  for (int i = 0; i < local_count; ++i) fg.scales[static_cast<std::size_t>(i)] = i + 1;
  fg.dimensions.assign(fg.scales.size(), std::vector<double>(starts.size(), 1.0));

  for (std::size_t wi = 0; wi < starts.size(); ++wi) {
    TimeSeries win;
    win.rate_hz = x.rate_hz;
    win.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(starts[wi]),
                       x.samples.begin() + static_cast<std::ptrdiff_t>(starts[wi] + opt.window_samples));
    try {
      const CoverProfile cover = multiscale_cover(win, opt.max_scale);
      const LocalDimensions local = local_dimensions(cover, opt.slope_window);
      for (std::size_t si = 0; si < local.dimension.size(); ++si) {
        fg.dimensions[si][wi] = local.dimension[si];
      }
    } catch (const std::runtime_error&) {
      if (!opt.flat_as_unit_dimension) throw;
      // constant window mapped to D = 1 across all scales
    }
  }
  return fg;
}

double higuchi_fd(const TimeSeries& x, int k_max) {
  x.validate();
  const std::size_t n = x.size();
  if (k_max < 2 || static_cast<std::size_t>(k_max) > n / 4) {
    throw std::invalid_argument("higuchi_fd: k_max outside [2, n/4]");
  }

  const auto& v = x.samples;
  std::vector<double> log_k, log_l;
  for (int k = 1; k <= k_max; ++k) {
    double lk = 0.0;
    for (int m = 0; m < k; ++m) {
      const std::size_t steps = (n - 1 - static_cast<std::size_t>(m)) / static_cast<std::size_t>(k);
      if (steps == 0) continue;
      double length = 0.0;
      for (std::size_t i = 1; i <= steps; ++i) {
        length += std::abs(v[static_cast<std::size_t>(m) + i * static_cast<std::size_t>(k)] -
                           v[static_cast<std::size_t>(m) + (i - 1) * static_cast<std::size_t>(k)]);
      }
      // normalize to the full record length, then by the stride
      length *= static_cast<double>(n - 1) /
                (static_cast<double>(steps) * static_cast<double>(k) * static_cast<double>(k));
      lk += length;
    }
    lk /= static_cast<double>(k);
    if (lk <= 0.0) {
      throw std::runtime_error("higuchi_fd: constant signal");
    }
    log_k.push_back(std::log(static_cast<double>(k)));
    log_l.push_back(std::log(lk));
  }
  const LineFit fit = least_squares_fit(log_k, log_l);
  return -fit.slope;
}

}  // namespace fractalis::morphofd
