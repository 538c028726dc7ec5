#include "fractalis/features.hpp"

#include <cmath>
#include <stdexcept>

#include "fractalis/fluctuation.hpp"
#include "fractalis/morphofd.hpp"

namespace fractalis::features {

namespace {

void check_finite(const FeatureVector& fv) {
  for (std::size_t i = 0; i < fv.values.size(); ++i) {
    if (!std::isfinite(fv.values[i])) {
      throw std::runtime_error("features: non-finite value for '" + fv.names[i] + "'");
    }
  }
}

void check_dimension(const FeatureVector& fv, std::size_t expected) {
  if (fv.values.size() != expected || fv.names.size() != expected) {
    throw std::runtime_error("features: dimension mismatch for family " + fv.family);
  }
}

}  // namespace

Family family_from_name(const std::string& name) {
  if (name == "mfd") return Family::mfd;
  if (name == "mfdfa") return Family::mfdfa;
  if (name == "hfd") return Family::hfd;
  if (name == "psd") return Family::psd;
  throw std::invalid_argument("features: unknown family '" + name + "'");
}

std::string family_name(Family family) {
  switch (family) {
    case Family::mfd: return "mfd";
    case Family::mfdfa: return "mfdfa";
    case Family::hfd: return "hfd";
    case Family::psd: return "psd";
  }
  return "?";
}

std::size_t family_dimension(Family family) {
  switch (family) {
    case Family::mfd: return 90;
    case Family::mfdfa: return 30;
    case Family::hfd: return 7;
    case Family::psd: return 64;
  }
  return 0;
}

ChannelSet ChannelSet::left() {
  return {"left", {"Fp1", "AF3", "F7", "F3", "FC5", "FC1", "T7", "C3", "CP5", "CP1", "P3", "P7"}};
}

ChannelSet ChannelSet::right() {
  return {"right", {"Fp2", "AF4", "F4", "F8", "FC2", "FC6", "C4", "T8", "CP2", "CP6", "P4", "P8"}};
}

ChannelSet ChannelSet::custom(std::vector<std::string> channels) {
  return {"custom", std::move(channels)};
}

ChannelSet ChannelSet::named(const std::string& name) {
  if (name == "left") return left();
  if (name == "right") return right();
  throw std::invalid_argument("ChannelSet: unknown set '" + name + "'");
}

FeatureVector extract_mfd_features(const TimeSeries& x, const MfdFeatureOptions& opt) {
  const std::vector<TimeSeries> windows = window_split(x, opt.window_s, opt.overlap);
  if (windows.empty()) throw std::invalid_argument("extract_mfd_features: signal shorter than one window");

  const std::size_t win_len = windows.front().size();
  const int max_scale = static_cast<int>(win_len / 7);
  if (max_scale < opt.slope_window) {
    throw std::invalid_argument("extract_mfd_features: window too short for the scale range");
  }
  const int local_count = max_scale - opt.slope_window + 1;
  if (local_count < opt.sampled_scales) {
    throw std::invalid_argument("extract_mfd_features: fewer local scales than sampled features");
  }

  // 30 evenly spaced positions along the local-D scale axis
  std::vector<int> picks(static_cast<std::size_t>(opt.sampled_scales));
  for (int j = 0; j < opt.sampled_scales; ++j) {
    picks[static_cast<std::size_t>(j)] = static_cast<int>(std::llround(
        static_cast<double>(j) * (local_count - 1) / (opt.sampled_scales - 1)));
  }

  // sampled local dimension per (window, scale position)
  std::vector<std::vector<double>> per_scale(
      static_cast<std::size_t>(opt.sampled_scales),
      std::vector<double>(windows.size(), 1.0));
  std::vector<int> pick_scales(static_cast<std::size_t>(opt.sampled_scales), 0);
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    try {
      const morphofd::CoverProfile cover = morphofd::multiscale_cover(windows[wi], max_scale);
      const morphofd::LocalDimensions local = morphofd::local_dimensions(cover, opt.slope_window);
      for (int j = 0; j < opt.sampled_scales; ++j) {
        const auto idx = static_cast<std::size_t>(picks[static_cast<std::size_t>(j)]);
        per_scale[static_cast<std::size_t>(j)][wi] = local.dimension[idx];
        pick_scales[static_cast<std::size_t>(j)] = local.scales[idx];
      }
    } catch (const std::runtime_error&) {
      if (!opt.flat_as_unit_dimension) throw;
      for (int j = 0; j < opt.sampled_scales; ++j) {
        per_scale[static_cast<std::size_t>(j)][wi] = 1.0;
      }
    }
  }
  if (pick_scales[0] == 0) {
    // every window was flat; recover the scale labels from the pick indices
    for (int j = 0; j < opt.sampled_scales; ++j) {
      pick_scales[static_cast<std::size_t>(j)] = picks[static_cast<std::size_t>(j)] + 1;
    }
  }

  FeatureVector fv;
  fv.family = "mfd";
  const char* stats[] = {"mean", "median", "std"};
  for (const char* stat : stats) {
    for (int j = 0; j < opt.sampled_scales; ++j) {
      const SummaryStats s = summarize(per_scale[static_cast<std::size_t>(j)]);
      fv.names.push_back(std::string("mfd_") + stat + "_s" +
                         std::to_string(pick_scales[static_cast<std::size_t>(j)]));
      if (stat == stats[0]) {
        fv.values.push_back(s.mean);
      } else if (stat == stats[1]) {
        fv.values.push_back(s.median);
      } else {
        fv.values.push_back(s.std_dev);
      }
    }
  }
  check_dimension(fv, 3 * static_cast<std::size_t>(opt.sampled_scales));
  check_finite(fv);
  return fv;
}

FeatureVector extract_mfdfa_features(const TimeSeries& x, const MfdfaFeatureOptions& opt) {
  if (!(opt.fraction > 0.0 && opt.fraction <= 1.0)) {
    throw std::invalid_argument("extract_mfdfa_features: fraction must lie in (0,1]");
  }
  const std::size_t keep =
      static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) * opt.fraction));
  if (keep < 4 * static_cast<std::size_t>(opt.scale_hi)) {
    throw std::invalid_argument("extract_mfdfa_features: retained segment shorter than 4x max scale");
  }

  TimeSeries tail;
  tail.rate_hz = x.rate_hz;
  tail.samples.assign(x.samples.end() - static_cast<std::ptrdiff_t>(keep), x.samples.end());

  const auto grid = fluctuation::ScaleGrid::log_spaced(opt.scale_lo, opt.scale_hi, opt.scale_count);
  const auto qs = fluctuation::QGrid::linear(opt.q_lo, opt.q_hi, opt.q_count);
  const fluctuation::FluctuationField field = fluctuation::mfdfa(tail, grid, qs);
  const fluctuation::MultifractalSpectrum spec = fluctuation::spectrum(field);

  FeatureVector fv;
  fv.family = "mfdfa";
  for (std::size_t i = 0; i < spec.h.size(); ++i) {
    fv.names.push_back("mfdfa_h_q" + std::to_string(i + 1));
    fv.values.push_back(spec.h[i]);
  }
  for (std::size_t i = 0; i < spec.D.size(); ++i) {
    fv.names.push_back("mfdfa_D_q" + std::to_string(i + 1));
    fv.values.push_back(spec.D[i]);
  }
  check_dimension(fv, 2 * (static_cast<std::size_t>(opt.q_count) - 1));
  check_finite(fv);
  return fv;
}

FeatureVector extract_hfd_features(const TimeSeries& x, const HfdFeatureOptions& opt) {
  const std::vector<TimeSeries> windows = window_split(x, opt.window_s, opt.overlap);
  if (windows.empty()) throw std::invalid_argument("extract_hfd_features: signal shorter than one window");

  FeatureVector fv;
  fv.family = "hfd";
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    fv.names.push_back("hfd_w" + std::to_string(wi));
    fv.values.push_back(morphofd::higuchi_fd(windows[wi], opt.k_max));
  }
  check_finite(fv);
  return fv;
}

FeatureVector extract_psd_features(const TimeSeries& x) {
  const std::vector<double> psd = dsp::welch_psd(x, 64);
  FeatureVector fv;
  fv.family = "psd";
  for (std::size_t b = 0; b < psd.size(); ++b) {
    fv.names.push_back("psd_b" + std::to_string(b));
    fv.values.push_back(psd[b]);
  }
  check_dimension(fv, 64);
  check_finite(fv);
  return fv;
}

FeatureVector extract_trial(const Trial& trial, Family family, const dsp::BandSpec& band,
                            const ChannelSet& chans, const TrialExtractOptions& opt) {
  if (chans.channels.empty()) throw std::invalid_argument("extract_trial: empty channel set");
  for (const std::string& name : chans.channels) {
    if (!trial.has_channel(name)) {
      throw std::invalid_argument("extract_trial: missing channel '" + name + "'");
    }
  }

  FeatureVector out;
  out.family = family_name(family);
  out.band = band.name;
  for (const std::string& name : chans.channels) {
    const TimeSeries filtered = dsp::filter_band(trial.channel(name), band);
    FeatureVector fv;
    switch (family) {
      case Family::mfd: fv = extract_mfd_features(filtered, opt.mfd); break;
      case Family::mfdfa: fv = extract_mfdfa_features(filtered, opt.mfdfa); break;
      case Family::hfd: fv = extract_hfd_features(filtered, opt.hfd); break;
      case Family::psd: fv = extract_psd_features(filtered); break;
    }
    for (std::size_t i = 0; i < fv.values.size(); ++i) {
      out.names.push_back(name + "." + band.name + "." + fv.names[i]);
      out.values.push_back(fv.values[i]);
    }
  }
  check_finite(out);
  return out;
}

}  // namespace fractalis::features
