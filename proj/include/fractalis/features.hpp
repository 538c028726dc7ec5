#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/dsp.hpp"

namespace fractalis::features {

enum class Family { mfd, mfdfa, hfd, psd };

Family family_from_name(const std::string& name);
std::string family_name(Family family);

// per-channel, per-band dimension of each family
std::size_t family_dimension(Family family);

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;
  std::string family;
  std::string band;
  std::string channel;
};

struct ChannelSet {
  std::string name;  // left, right or custom
  std::vector<std::string> channels;

  static ChannelSet left();
  static ChannelSet right();
  static ChannelSet custom(std::vector<std::string> channels);
  static ChannelSet named(const std::string& name);
};

struct MfdFeatureOptions {
  double window_s{15.0};
  double overlap{0.5};
  int slope_window{7};
  int sampled_scales{30};
  bool flat_as_unit_dimension{false};
};

// 90-D: per 15 s window (50% overlap) the local MFD curve is computed up to
// max scale window/7 and sampled at 30 evenly spaced scale positions; each
// position is then summarized across windows by mean, median and standard
// deviation (stat-major ordering: 30 means, 30 medians, 30 stds).
FeatureVector extract_mfd_features(const TimeSeries& x, const MfdFeatureOptions& opt = {});

struct MfdfaFeatureOptions {
  double fraction{0.5};  // trailing fraction of the signal to analyze
  int scale_lo{30};
  int scale_hi{500};
  int scale_count{10};
  double q_lo{-5.0};
  double q_hi{5.0};
  int q_count{16};
};

// 30-D: multifractal spectrum of the trailing fraction of the signal,
// 15 h(q) values followed by 15 D(q) values.
FeatureVector extract_mfdfa_features(const TimeSeries& x, const MfdfaFeatureOptions& opt = {});

struct HfdFeatureOptions {
  double window_s{15.0};
  double overlap{0.5};
  int k_max{32};
};

// One Higuchi FD per 15 s window (7-D for a 60 s trial at 128 Hz).
FeatureVector extract_hfd_features(const TimeSeries& x, const HfdFeatureOptions& opt = {});

// 64-D Welch PSD of the entire signal.
FeatureVector extract_psd_features(const TimeSeries& x);

struct TrialExtractOptions {
  MfdFeatureOptions mfd;
  MfdfaFeatureOptions mfdfa;
  HfdFeatureOptions hfd;
};

// Band-filters each requested channel and concatenates per-channel feature
// vectors channel-major. Total dimension = family dimension x |channels|.
FeatureVector extract_trial(const Trial& trial, Family family, const dsp::BandSpec& band,
                            const ChannelSet& chans, const TrialExtractOptions& opt = {});

}  // namespace fractalis::features
