#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "fractalis/core.hpp"

namespace fractalis::dsp {

struct BandSpec {
  std::string name;  // raw, alpha, beta, gamma — or custom
  double lo_hz{0.0};
  double hi_hz{0.0};

  bool is_raw() const { return name == "raw"; }

  static BandSpec raw() { return {"raw", 0.0, 0.0}; }
  static BandSpec alpha() { return {"alpha", 8.0, 13.0}; }
  static BandSpec beta() { return {"beta", 14.0, 29.0}; }
  static BandSpec gamma() { return {"gamma", 30.0, 45.0}; }
  static BandSpec named(const std::string& name);
};

// One biquad: y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0{0.0}, b1{0.0}, b2{0.0};
  double a1{0.0}, a2{0.0};
};

struct FilterRealization {
  std::vector<Biquad> sections;

  // complex frequency response at normalized angular frequency w = 2*pi*f/fs
  std::complex<double> response(double w) const;
  double magnitude_db(double freq_hz, double rate_hz) const;
  // largest pole modulus across sections
  double max_pole_modulus() const;
};

// Analog Butterworth prototype of the given order, band-transformed and
// bilinear-mapped with edge prewarping, emitted as stable second-order
// sections. The band edges land exactly at -3 dB.
FilterRealization design_butterworth_bandpass(int order, double lo_hz, double hi_hz,
                                              double rate_hz);

// Zero-phase forward-backward application of the 10th-order band filter.
// Output length equals input length; the raw band passes through unchanged.
TimeSeries filter_band(const TimeSeries& x, const BandSpec& band);

// Zero-phase application of an explicit realization (odd-extension padding,
// per-section step-matched initial conditions).
TimeSeries sosfiltfilt(const FilterRealization& filt, const TimeSeries& x);

struct WelchSpectrum {
  std::vector<double> freqs_hz;  // one-sided bin centers
  std::vector<double> psd;       // density, unit^2/Hz
};

// Welch estimate: Hann-windowed 256-sample segments, 50% overlap, averaged
// one-sided periodograms.
WelchSpectrum welch_periodogram(const TimeSeries& x);

// The Welch PSD band-averaged onto n_features uniform frequency bands from
// 0 to Nyquist.
std::vector<double> welch_psd(const TimeSeries& x, std::size_t n_features = 64);

}  // namespace fractalis::dsp
