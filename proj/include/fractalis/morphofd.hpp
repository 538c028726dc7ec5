#pragma once

#include <cstddef>
#include <vector>

#include "fractalis/core.hpp"

namespace fractalis::morphofd {

// Multiscale morphological cover of a signal graph: at scale s the graph is
// dilated/eroded by a flat segment of half-width s samples and the covered
// area is the summed dilation-erosion gap.
struct CoverProfile {
  std::vector<int> scales;      // 1..max_scale
  std::vector<double> areas;    // A_B(s), strictly positive, non-decreasing
};

struct DimensionEstimate {
  double dimension{1.0};   // clamped to [1,2]
  double raw{1.0};         // unclamped 2 - slope, for diagnostics
  LineFit fit;
};

// Local fractal dimension profile over a sliding scale window of w scales.
struct LocalDimensions {
  std::vector<int> scales;        // lower endpoint s of each window {s..s+w-1}
  std::vector<double> dimension;  // clamped local D(s)
  std::vector<double> raw;        // unclamped
};

// Time-scale field of local dimensions, one column per analysis window.
struct Fractogram {
  std::vector<std::size_t> times;   // window start indices (samples)
  std::vector<int> scales;          // local scale positions
  std::vector<std::vector<double>> dimensions;  // [scale][window], clamped to [1,2]
  int slope_window_w{7};
};

// Computes A_B(s) for s = 1..max_scale by iterated unit-radius running
// max/min (flat dilations compose exactly across integer scales). Edge
// samples are replicated. Throws "degenerate flat signal" when the input is
// constant, and on max_scale outside [1, n/2].
CoverProfile multiscale_cover(const TimeSeries& x, int max_scale);

// Global D from the log-log slope of A_B(s) over scales [s_lo, s_hi]
// (at least 3 points): D = 2 - slope, clamped to [1,2].
DimensionEstimate fractal_dimension_global(const CoverProfile& cover, int s_lo, int s_hi);

// Local D at every scale position s from the slope over {s..s+w-1}.
LocalDimensions local_dimensions(const CoverProfile& cover, int w);

struct FractogramOptions {
  int max_scale{274};
  int slope_window{7};
  std::size_t window_samples{1920};
  std::size_t hop_samples{960};
  // Map constant analysis windows to D = 1 instead of failing.
  bool flat_as_unit_dimension{false};
};

Fractogram fractogram(const TimeSeries& x, const FractogramOptions& opt);

// Higuchi's curve-length fractal dimension with k = 1..k_max. Throws on a
// constant signal and on k_max outside [2, n/4].
double higuchi_fd(const TimeSeries& x, int k_max);

}  // namespace fractalis::morphofd
