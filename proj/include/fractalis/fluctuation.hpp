#pragma once

#include <cstddef>
#include <vector>

#include "fractalis/core.hpp"

namespace fractalis::fluctuation {

// Strictly increasing integer scales, each in [4, n/4] for the series they
// are applied to.
struct ScaleGrid {
  std::vector<int> scales;

  // count log-spaced integers in [lo, hi]; duplicates after rounding are
  // collapsed.
  static ScaleGrid log_spaced(int lo, int hi, int count);
  static ScaleGrid linear(int lo, int hi, int count);
  // default analysis grid for a series of length n
  static ScaleGrid default_for(std::size_t n);

  void validate_for(std::size_t n) const;
};

struct QGrid {
  std::vector<double> qs;
  static QGrid linear(double lo, double hi, int count);
  // 16 evenly spaced moments from -5 to 5 (step 2/3, never exactly zero)
  static QGrid default_grid();
  void validate() const;
  // moments within 1e-12 of zero take the logarithmic-averaging branch
  bool has_zero() const;
};

struct FluctuationField {
  ScaleGrid scales;
  QGrid qs;
  std::vector<std::vector<double>> F;  // [q][scale], strictly positive
  std::vector<double> H;               // fitted exponent per q
  std::vector<double> fit_r2;          // r^2 per q
  bool floored{false};                 // epsilon floor engaged on some segment
};

struct MultifractalSpectrum {
  std::vector<double> q;   // the q grid the exponents refer to
  std::vector<double> t;   // mass exponents t(q) = q*H(q) - 1
  std::vector<double> h;   // singularity exponents, |Q|-1 finite differences
  std::vector<double> D;   // spectrum values at the lower endpoint of each pair
  double width() const;    // max(h) - min(h)
};

struct DfaResult {
  double hurst{0.0};
  std::vector<double> F;  // F(s) per scale
  LineFit fit;
};

enum class ProcessClass { fgn, fbm };

struct Characterization {
  ProcessClass kind{ProcessClass::fgn};
  double hurst{0.0};       // exponent of the underlying process
  double dfa_exponent{0.0};
};

// Cumulative sum of the mean-removed samples. The profile a detrended
// fluctuation analysis walks on; its last value telescopes to ~0.
TimeSeries profile(const TimeSeries& x);

// Per-segment RMS of linearly detrended profile values at scale s:
// floor(N/s) forward segments, trailing remainder discarded.
std::vector<double> segment_rms(const TimeSeries& profile_y, int s);

struct SegmentOptions {
  // When set, segments are also taken from the series end backwards
  // (2*N_s segments total).
  bool both_ends{false};
};

DfaResult dfa(const TimeSeries& x, const ScaleGrid& grid, const SegmentOptions& opt = {});

FluctuationField mfdfa(const TimeSeries& x, const ScaleGrid& grid, const QGrid& qs,
                       const SegmentOptions& opt = {});

// Mass exponents t(q) = q*H(q) - 1 from fitted generalized exponents.
MultifractalSpectrum mass_exponents(const FluctuationField& field);

// Completes the spectrum: h by finite differences of t, D = q'*h - t(q')
// with q' the lower endpoint of each difference pair (the largest moment is
// excluded). |Q| points of t yield |Q|-1 points of (h, D).
MultifractalSpectrum spectrum(const FluctuationField& field);

// DFA-based fGn/fBm decision: estimated exponent <= 1 reports a stationary
// fGn with that exponent, otherwise an fBm with exponent H-1.
Characterization characterize(const TimeSeries& x);

}  // namespace fractalis::fluctuation
