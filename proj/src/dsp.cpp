#include "fractalis/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fractalis/fft.hpp"

namespace fractalis::dsp {

namespace {

using cplx = std::complex<double>;

constexpr int kBandOrder = 10;
constexpr std::size_t kWelchSegment = 256;

std::size_t filtfilt_pad(const FilterRealization& filt) {
  return 3 * (2 * filt.sections.size() + 1);
}

// forward pass of one biquad with given initial state (direct form II
// transposed)
void biquad_run(const Biquad& s, std::vector<double>& x, double z1_0, double z2_0) {
  double z1 = z1_0, z2 = z2_0;
  for (double& v : x) {
    const double in = v;
    const double out = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * out + z2;
    z2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}

// steady-state biquad state for a unit step input, used to suppress startup
// transients
void biquad_step_state(const Biquad& s, double& z1, double& z2) {
  const double h1 = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
  z2 = s.b2 - s.a2 * h1;
  z1 = s.b1 - s.a1 * h1 + z2;
}

void sos_pass(const FilterRealization& filt, std::vector<double>& x) {
  for (const Biquad& s : filt.sections) {
    double z1 = 0.0, z2 = 0.0;
    biquad_step_state(s, z1, z2);
    biquad_run(s, x, z1 * x.front(), z2 * x.front());
  }
}

}  // namespace

BandSpec BandSpec::named(const std::string& name) {
  if (name == "raw") return raw();
  if (name == "alpha") return alpha();
  if (name == "beta") return beta();
  if (name == "gamma") return gamma();
  throw std::invalid_argument("BandSpec: unknown band '" + name + "'");
}

std::complex<double> FilterRealization::response(double w) const {
  const cplx z = std::polar(1.0, w);
  const cplx zi = 1.0 / z;
  cplx h(1.0, 0.0);
  for (const Biquad& s : sections) {
    h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
  }
  return h;
}

double FilterRealization::magnitude_db(double freq_hz, double rate_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / rate_hz;
  return 20.0 * std::log10(std::abs(response(w)));
}

double FilterRealization::max_pole_modulus() const {
  double worst = 0.0;
  for (const Biquad& s : sections) {
    // roots of z^2 + a1 z + a2
    const cplx disc = std::sqrt(cplx(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    worst = std::max({worst, std::abs((-s.a1 + disc) / 2.0), std::abs((-s.a1 - disc) / 2.0)});
  }
  return worst;
}

FilterRealization design_butterworth_bandpass(int order, double lo_hz, double hi_hz,
                                              double rate_hz) {
  if (order < 1) throw std::invalid_argument("design_butterworth_bandpass: order must be >= 1");
  const double nyquist = rate_hz / 2.0;
  if (!(lo_hz > 0.0 && lo_hz < hi_hz && hi_hz < nyquist)) {
    throw std::invalid_argument("design_butterworth_bandpass: band outside (0, Nyquist)");
  }

  const double fs2 = 2.0 * rate_hz;  // bilinear constant 2/T
  const double w_lo = fs2 * std::tan(std::numbers::pi * lo_hz / rate_hz);
  const double w_hi = fs2 * std::tan(std::numbers::pi * hi_hz / rate_hz);
  const double bw = w_hi - w_lo;
  const double w0_sq = w_lo * w_hi;

  // analog prototype poles on the unit left half-circle
  std::vector<cplx> proto(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) {
    const double ang = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
    proto[static_cast<std::size_t>(k)] = std::polar(1.0, ang);
  }

  // lowpass -> bandpass: each prototype pole p yields the two roots of
  // s^2 - p*bw*s + w0^2
  std::vector<cplx> analog_poles;
  analog_poles.reserve(2 * static_cast<std::size_t>(order));
  for (const cplx& p : proto) {
    const cplx pb = p * bw * 0.5;
    const cplx disc = std::sqrt(pb * pb - w0_sq);
    analog_poles.push_back(pb + disc);
    analog_poles.push_back(pb - disc);
  }

  // bilinear map; gain tracks k_d = bw^order * (2fs)^order / prod(2fs - s_pole)
  std::vector<cplx> digital_poles;
  digital_poles.reserve(analog_poles.size());
  cplx denom(1.0, 0.0);
  for (const cplx& s : analog_poles) {
    digital_poles.push_back((fs2 + s) / (fs2 - s));
    denom *= fs2 - s;
  }
  const cplx gain_c = std::pow(cplx(bw * fs2, 0.0), order) / denom;
  const double gain = gain_c.real();

  // pair conjugate poles into sections, most damped first
  std::vector<cplx> upper;
  for (const cplx& p : digital_poles) {
    if (p.imag() > 0.0) upper.push_back(p);
  }
  if (upper.size() != static_cast<std::size_t>(order)) {
    throw std::runtime_error("design_butterworth_bandpass: expected conjugate pole pairs");
  }
  std::sort(upper.begin(), upper.end(),
            [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });

  // each section carries one zero at z=1 and one at z=-1 (numerator z^2-1)
  // with an even share of the overall gain
  FilterRealization filt;
  const double g = std::pow(std::abs(gain), 1.0 / static_cast<double>(order));
  const double g_sign = gain < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    Biquad s;
    const double sec_gain = (i == 0 ? g_sign * g : g);
    s.b0 = sec_gain;
    s.b1 = 0.0;
    s.b2 = -sec_gain;
    s.a1 = -2.0 * upper[i].real();
    s.a2 = std::norm(upper[i]);
    filt.sections.push_back(s);
  }

  if (filt.max_pole_modulus() >= 1.0) {
    throw std::runtime_error("design_butterworth_bandpass: unstable realization");
  }
  return filt;
}

TimeSeries sosfiltfilt(const FilterRealization& filt, const TimeSeries& x) {
  x.validate();
  const std::size_t n = x.size();
  const std::size_t pad = filtfilt_pad(filt);
  if (n <= pad) {
    throw std::invalid_argument("sosfiltfilt: signal shorter than filter startup padding");
  }

  // odd extension around both endpoints
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x.samples[0] - x.samples[i]);
  ext.insert(ext.end(), x.samples.begin(), x.samples.end());
  for (std::size_t i = 1; i <= pad; ++i) {
    ext.push_back(2.0 * x.samples[n - 1] - x.samples[n - 1 - i]);
  }

  sos_pass(filt, ext);
  std::reverse(ext.begin(), ext.end());
  sos_pass(filt, ext);
  std::reverse(ext.begin(), ext.end());

  TimeSeries out;
  out.rate_hz = x.rate_hz;
  out.samples.assign(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                     ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
  return out;
}

TimeSeries filter_band(const TimeSeries& x, const BandSpec& band) {
  if (band.is_raw()) return x;
  const FilterRealization filt =
      design_butterworth_bandpass(kBandOrder, band.lo_hz, band.hi_hz, x.rate_hz);
  return sosfiltfilt(filt, x);
}

WelchSpectrum welch_periodogram(const TimeSeries& x) {
  x.validate();
  const std::size_t n = x.size();
  const std::size_t seg = kWelchSegment;
  if (n < seg) throw std::invalid_argument("welch_periodogram: need at least 256 samples");
  const std::size_t hop = seg / 2;

  std::vector<double> window(seg);
  double win_power = 0.0;
  for (std::size_t i = 0; i < seg; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(seg));
    win_power += window[i] * window[i];
  }
  const double scale = 1.0 / (x.rate_hz * win_power);

  const std::size_t n_bins = seg / 2 + 1;
  std::vector<double> acc(n_bins, 0.0);
  std::size_t n_segments = 0;
  std::vector<fft::cplx> buf(seg);
  for (std::size_t start = 0; start + seg <= n; start += hop) {
    for (std::size_t i = 0; i < seg; ++i) {
      buf[i] = fft::cplx(x.samples[start + i] * window[i], 0.0);
    }
    fft::forward(buf);
    for (std::size_t k = 0; k < n_bins; ++k) {
      double p = std::norm(buf[k]) * scale;
      if (k != 0 && k != seg / 2) p *= 2.0;  // fold the two-sided spectrum
      acc[k] += p;
    }
    ++n_segments;
  }

  WelchSpectrum spec;
  spec.freqs_hz.resize(n_bins);
  spec.psd.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    spec.freqs_hz[k] = static_cast<double>(k) * x.rate_hz / static_cast<double>(seg);
    spec.psd[k] = acc[k] / static_cast<double>(n_segments);
  }
  return spec;
}

std::vector<double> welch_psd(const TimeSeries& x, std::size_t n_features) {
  if (n_features == 0) throw std::invalid_argument("welch_psd: n_features must be positive");
  const WelchSpectrum spec = welch_periodogram(x);
  const std::size_t n_bins = spec.psd.size();

  std::vector<double> features(n_features, 0.0);
  std::vector<std::size_t> counts(n_features, 0);
  for (std::size_t k = 0; k < n_bins; ++k) {
    // uniform bands over [0, Nyquist]; the Nyquist bin joins the last band
    std::size_t band = (k * n_features) / (n_bins - 1);
    if (band >= n_features) band = n_features - 1;
    features[band] += spec.psd[k];
    counts[band] += 1;
  }
  for (std::size_t b = 0; b < n_features; ++b) {
    if (counts[b] > 0) features[b] /= static_cast<double>(counts[b]);
  }
  return features;
}

}  // namespace fractalis::dsp
