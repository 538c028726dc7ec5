#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fractalis {

// Uniformly sampled real-valued sequence. The universal input of every
// analysis routine in this library.
struct TimeSeries {
  std::vector<double> samples;
  double rate_hz{1.0};

  std::size_t size() const { return samples.size(); }
  double duration_s() const { return static_cast<double>(samples.size()) / rate_hz; }

  // Throws std::invalid_argument unless: length >= 2, all samples finite,
  // rate_hz > 0.
  void validate() const;
};

// One labeled multichannel recording. All channels share length and rate.
// Ratings are on the 1..9 self-assessment scale.
struct Trial {
  std::vector<std::pair<std::string, TimeSeries>> channels;
  std::string subject_id;
  std::map<std::string, double> labels;

  const TimeSeries& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const;

  void validate() const;
};

struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double r_squared{0.0};
};

struct SummaryStats {
  double mean{0.0};
  double median{0.0};
  double std_dev{0.0};  // population (divisor N)
};

// Ordinary least squares line through (xs, ys). Deterministic for a fixed
// input order. Throws on mismatched/short input or zero-variance xs
// ("degenerate abscissa").
LineFit least_squares_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Mean, median (midpoint average for even N) and population standard
// deviation. Throws on empty or non-finite input.
SummaryStats summarize(const std::vector<double>& values);

// Splits x into windows of window_s seconds with the given overlap fraction.
// hop = round(window * (1 - overlap_frac)); windows are emitted while they
// fit entirely inside the signal, the trailing remainder is discarded.
std::vector<TimeSeries> window_split(const TimeSeries& x, double window_s, double overlap_frac);

// Same split, parameterized directly in samples. Returns start indices.
std::vector<std::size_t> window_starts(std::size_t n, std::size_t window, std::size_t hop);

}  // namespace fractalis
