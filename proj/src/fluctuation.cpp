#include "fractalis/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fractalis::fluctuation {

namespace {

constexpr double kFloorFactor = 1e-12;

std::vector<double> log_of_int(const std::vector<int>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log(static_cast<double>(v[i]));
  return out;
}

// Generalized mean of strictly positive values: power mean for q != 0,
// geometric mean (log averaging) at q = 0.
double generalized_mean(const std::vector<double>& values, double q) {
  const double n = static_cast<double>(values.size());
  if (std::abs(q) < 1e-12) {
    double acc = 0.0;
    for (double v : values) acc += std::log(v);
    return std::exp(acc / n);
  }
  double acc = 0.0;
  for (double v : values) acc += std::pow(v, q);
  return std::pow(acc / n, 1.0 / q);
}

// RMS of the least-squares-line residuals of seg[0..s).
double detrended_rms(const double* seg, int s) {
  // closed-form simple regression on abscissa 0..s-1
  const double n = static_cast<double>(s);
  const double mean_t = 0.5 * (n - 1.0);
  const double var_t = (n * n - 1.0) / 12.0;  // population variance of 0..s-1

  double mean_y = 0.0;
  for (int i = 0; i < s; ++i) mean_y += seg[i];
  mean_y /= n;

  double cov = 0.0;
  for (int i = 0; i < s; ++i) cov += (static_cast<double>(i) - mean_t) * (seg[i] - mean_y);
  cov /= n;

  const double slope = cov / var_t;
  const double intercept = mean_y - slope * mean_t;

  double ss = 0.0;
  for (int i = 0; i < s; ++i) {
    const double r = seg[i] - (slope * static_cast<double>(i) + intercept);
    ss += r * r;
  }
  return std::sqrt(ss / n);
}

std::vector<double> all_segment_rms(const TimeSeries& y, int s, const SegmentOptions& opt) {
  const std::size_t n = y.size();
  const std::size_t ns = n / static_cast<std::size_t>(s);
  std::vector<double> out;
  out.reserve(opt.both_ends ? 2 * ns : ns);
  for (std::size_t k = 0; k < ns; ++k) {
    out.push_back(detrended_rms(y.samples.data() + k * static_cast<std::size_t>(s), s));
  }
  if (opt.both_ends) {
    const std::size_t tail = n - ns * static_cast<std::size_t>(s);
    for (std::size_t k = 0; k < ns; ++k) {
      out.push_back(detrended_rms(y.samples.data() + tail + k * static_cast<std::size_t>(s), s));
    }
  }
  return out;
}

double rms_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

ScaleGrid ScaleGrid::log_spaced(int lo, int hi, int count) {
  if (lo < 4 || hi <= lo || count < 2) {
    throw std::invalid_argument("ScaleGrid: need 4 <= lo < hi and count >= 2");
  }
  ScaleGrid g;
  const double llo = std::log(static_cast<double>(lo));
  const double lhi = std::log(static_cast<double>(hi));
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    const int s = static_cast<int>(std::llround(std::exp(llo + f * (lhi - llo))));
    if (g.scales.empty() || s > g.scales.back()) g.scales.push_back(s);
  }
  return g;
}

ScaleGrid ScaleGrid::linear(int lo, int hi, int count) {
  if (lo < 4 || hi <= lo || count < 2) {
    throw std::invalid_argument("ScaleGrid: need 4 <= lo < hi and count >= 2");
  }
  ScaleGrid g;
  for (int i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(count - 1);
    const int s = static_cast<int>(std::llround(lo + f * (hi - lo)));
    if (g.scales.empty() || s > g.scales.back()) g.scales.push_back(s);
  }
  return g;
}

ScaleGrid ScaleGrid::default_for(std::size_t n) {
  const int hi = std::max(64, static_cast<int>(n / 8));
  return log_spaced(16, hi, 20);
}

void ScaleGrid::validate_for(std::size_t n) const {
  if (scales.size() < 4) throw std::invalid_argument("ScaleGrid: need at least 4 scales");
  int prev = 0;
  for (int s : scales) {
    if (s < 4 || static_cast<std::size_t>(s) > n / 4) {
      throw std::invalid_argument("ScaleGrid: scales must lie in [4, n/4]");
    }
    if (s <= prev) throw std::invalid_argument("ScaleGrid: scales must be strictly increasing");
    prev = s;
  }
}

QGrid QGrid::linear(double lo, double hi, int count) {
  if (!(hi > lo) || count < 2) {
    throw std::invalid_argument("QGrid: need lo < hi and count >= 2");
  }
  QGrid g;
  g.qs.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    g.qs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return g;
}

QGrid QGrid::default_grid() { return linear(-5.0, 5.0, 16); }

void QGrid::validate() const {
  if (qs.size() < 2) throw std::invalid_argument("QGrid: need at least 2 moments");
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (!(qs[i] > qs[i - 1])) throw std::invalid_argument("QGrid: moments must be strictly increasing");
  }
}

bool QGrid::has_zero() const {
  for (double q : qs) {
    if (std::abs(q) < 1e-12) return true;
  }
  return false;
}

TimeSeries profile(const TimeSeries& x) {
  x.validate();
  double mean = 0.0;
  for (double v : x.samples) mean += v;
  mean /= static_cast<double>(x.size());

  TimeSeries y;
  y.rate_hz = x.rate_hz;
  y.samples.resize(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x.samples[i] - mean;
    y.samples[i] = acc;
  }
  return y;
}

std::vector<double> segment_rms(const TimeSeries& profile_y, int s) {
  const std::size_t n = profile_y.size();
  if (s < 4) throw std::invalid_argument("segment_rms: scale must be >= 4");
  if (static_cast<std::size_t>(s) > n / 2) {
    throw std::invalid_argument("segment_rms: scale exceeds half the series");
  }
  return all_segment_rms(profile_y, s, {});
}

DfaResult dfa(const TimeSeries& x, const ScaleGrid& grid, const SegmentOptions& opt) {
  grid.validate_for(x.size());
  const TimeSeries y = profile(x);

  DfaResult res;
  res.F.reserve(grid.scales.size());
  for (int s : grid.scales) {
    const std::vector<double> fk = all_segment_rms(y, s, opt);
    const double f = generalized_mean(fk, 2.0);
    if (f <= 0.0) throw std::runtime_error("dfa: degenerate trend");
    res.F.push_back(f);
  }

  std::vector<double> log_f(res.F.size());
  for (std::size_t i = 0; i < res.F.size(); ++i) log_f[i] = std::log(res.F[i]);
  res.fit = least_squares_fit(log_of_int(grid.scales), log_f);
  res.hurst = res.fit.slope;
  return res;
}

FluctuationField mfdfa(const TimeSeries& x, const ScaleGrid& grid, const QGrid& qs,
                       const SegmentOptions& opt) {
  grid.validate_for(x.size());
  qs.validate();
  const TimeSeries y = profile(x);
  const double floor_value = kFloorFactor * rms_of(y.samples);

  FluctuationField field;
  field.scales = grid;
  field.qs = qs;
  field.F.assign(qs.qs.size(), std::vector<double>(grid.scales.size(), 0.0));

  for (std::size_t si = 0; si < grid.scales.size(); ++si) {
    std::vector<double> fk = all_segment_rms(y, grid.scales[si], opt);
    for (double& f : fk) {
      if (f < floor_value) {
        f = floor_value;
        field.floored = true;
      }
    }
    for (std::size_t qi = 0; qi < qs.qs.size(); ++qi) {
      field.F[qi][si] = generalized_mean(fk, qs.qs[qi]);
    }
  }

  const std::vector<double> log_s = log_of_int(grid.scales);
  field.H.resize(qs.qs.size());
  field.fit_r2.resize(qs.qs.size());
  for (std::size_t qi = 0; qi < qs.qs.size(); ++qi) {
    std::vector<double> log_f(grid.scales.size());
    for (std::size_t si = 0; si < grid.scales.size(); ++si) log_f[si] = std::log(field.F[qi][si]);
    const LineFit fit = least_squares_fit(log_s, log_f);
    field.H[qi] = fit.slope;
    field.fit_r2[qi] = fit.r_squared;
  }
  return field;
}

MultifractalSpectrum mass_exponents(const FluctuationField& field) {
  if (field.H.size() != field.qs.qs.size()) {
    throw std::invalid_argument("mass_exponents: field has no fitted exponents");
  }
  MultifractalSpectrum spec;
  spec.q = field.qs.qs;
  spec.t.resize(field.H.size());
  for (std::size_t i = 0; i < field.H.size(); ++i) {
    spec.t[i] = field.qs.qs[i] * field.H[i] - 1.0;
  }
  return spec;
}

MultifractalSpectrum spectrum(const FluctuationField& field) {
  MultifractalSpectrum spec = mass_exponents(field);
  const std::size_t nq = spec.q.size();
  if (nq < 2) throw std::invalid_argument("spectrum: need at least 2 moments");
  for (std::size_t i = 1; i < nq; ++i) {
    if (spec.q[i] == spec.q[i - 1]) throw std::invalid_argument("spectrum: duplicate q values");
  }

  spec.h.resize(nq - 1);
  spec.D.resize(nq - 1);
  for (std::size_t i = 1; i < nq; ++i) {
    const double h = (spec.t[i] - spec.t[i - 1]) / (spec.q[i] - spec.q[i - 1]);
    spec.h[i - 1] = h;
    spec.D[i - 1] = spec.q[i - 1] * h - spec.t[i - 1];
  }
  return spec;
}

double MultifractalSpectrum::width() const {
  if (h.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  return *hi - *lo;
}

Characterization characterize(const TimeSeries& x) {
  if (x.size() < 512) throw std::invalid_argument("characterize: need at least 512 samples");
  const DfaResult res = dfa(x, ScaleGrid::default_for(x.size()));

  Characterization c;
  c.dfa_exponent = res.hurst;
  if (res.hurst <= 1.0) {  // boundary value closes the stationary branch
    c.kind = ProcessClass::fgn;
    c.hurst = res.hurst;
  } else {
    c.kind = ProcessClass::fbm;
    c.hurst = res.hurst - 1.0;
  }
  return c;
}

}  // namespace fractalis::fluctuation
