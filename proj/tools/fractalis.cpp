#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/csv.hpp"
#include "fractalis/dsp.hpp"
#include "fractalis/features.hpp"
#include "fractalis/fluctuation.hpp"
#include "fractalis/mlpipe.hpp"
#include "fractalis/morphofd.hpp"
#include "fractalis/parallel.hpp"
#include "fractalis/stationarity.hpp"
#include "fractalis/synth.hpp"

namespace {

using fractalis::TimeSeries;
using fractalis::Trial;
namespace csv = fractalis::csv;
namespace dsp = fractalis::dsp;
namespace features = fractalis::features;
namespace fluct = fractalis::fluctuation;
namespace mlpipe = fractalis::mlpipe;
namespace morphofd = fractalis::morphofd;
namespace stationarity = fractalis::stationarity;
namespace synth = fractalis::synth;

// flag/value problems exit 1, data/numeric problems exit 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScaleSpec {
  int lo{30};
  int hi{500};
  int count{10};
  bool log{true};
};

// "<lo>:<hi>:<count>[log]"
ScaleSpec parse_scale_spec(const std::string& text) {
  ScaleSpec spec;
  std::string body = text;
  if (body.size() > 3 && body.substr(body.size() - 3) == "log") {
    spec.log = true;
    body = body.substr(0, body.size() - 3);
  } else {
    spec.log = false;
  }
  const auto c1 = body.find(':');
  const auto c2 = body.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("bad scale spec '" + text + "', expected lo:hi:count[log]");
  }
  try {
    spec.lo = std::stoi(body.substr(0, c1));
    spec.hi = std::stoi(body.substr(c1 + 1, c2 - c1 - 1));
    spec.count = std::stoi(body.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("bad scale spec '" + text + "'");
  }
  if (spec.lo < 4 || spec.hi <= spec.lo || spec.count < 2) {
    throw UsageError("degenerate scale spec '" + text + "'");
  }
  return spec;
}

fluct::ScaleGrid make_grid(const ScaleSpec& spec) {
  return spec.log ? fluct::ScaleGrid::log_spaced(spec.lo, spec.hi, spec.count)
                  : fluct::ScaleGrid::linear(spec.lo, spec.hi, spec.count);
}

// "<lo>:<hi>:<count>"
fluct::QGrid parse_q_spec(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("bad q spec '" + text + "', expected lo:hi:count");
  }
  double lo = 0.0, hi = 0.0;
  int count = 0;
  try {
    lo = std::stod(text.substr(0, c1));
    hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    count = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw UsageError("bad q spec '" + text + "'");
  }
  if (!(hi > lo) || count < 2) throw UsageError("degenerate q spec '" + text + "'");
  return fluct::QGrid::linear(lo, hi, count);
}

// reads a series file directly, or one channel of a trial file
TimeSeries load_series(const std::string& path, const std::string& channel) {
  if (csv::looks_like_trial(path)) {
    const Trial trial = csv::read_trial(path);
    if (channel.empty()) {
      std::string names;
      for (const auto& [name, _] : trial.channels) names += name + " ";
      throw UsageError("input is a trial file; pick a channel with --channel (available: " + names +
                       ")");
    }
    return trial.channel(channel);
  }
  return csv::read_series(path);
}

std::string fmt(double v) { return csv::format_double(v); }

// echoed into every output header
csv::Metadata base_meta(const std::string& subcommand) {
  return {{"tool", "fractalis"}, {"subcommand", subcommand}};
}

void require_usage(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

// flag-value validation failures are usage errors, not data errors
template <typename Fn>
auto usage_checked(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

double parse_gamma_flag(const std::string& text) {
  if (text == "scale") return -1.0;
  try {
    const double v = std::stod(text);
    if (v <= 0.0) throw UsageError("--gamma must be positive or 'scale'");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("bad --gamma '" + text + "'");
  }
}

struct FeatureJobConfig {
  std::string family{"mfd"};
  std::string band{"raw"};
  std::string channels{"left"};
  std::string label{"arousal"};
  double fraction{0.5};
  bool flat_as_one{false};
};

features::ChannelSet channels_from_flag(const std::string& flag) {
  if (flag == "left" || flag == "right") return features::ChannelSet::named(flag);
  std::vector<std::string> names;
  std::string cur;
  for (char c : flag) {
    if (c == ',') {
      if (!cur.empty()) names.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) names.push_back(cur);
  if (names.empty()) throw UsageError("empty --channels");
  return features::ChannelSet::custom(names);
}

csv::FeatureMatrix extract_directory(const std::string& dir, const FeatureJobConfig& cfg) {
  const auto files = csv::list_csv_files(dir);
  if (files.empty()) throw std::runtime_error("no .csv trials in '" + dir + "'");

  const features::Family family = features::family_from_name(cfg.family);
  const dsp::BandSpec band = dsp::BandSpec::named(cfg.band);
  const features::ChannelSet chans = channels_from_flag(cfg.channels);
  features::TrialExtractOptions opt;
  opt.mfdfa.fraction = cfg.fraction;
  opt.mfd.flat_as_unit_dimension = cfg.flat_as_one;

  csv::FeatureMatrix fm;
  fm.label_name = cfg.label;
  fm.rows.resize(files.size());
  fm.subjects.resize(files.size());
  fm.labels.resize(files.size());
  std::vector<std::vector<std::string>> names(files.size());

  fractalis::parallel::parallel_for(files.size(), [&](std::size_t i) {
    const Trial trial = csv::read_trial(files[i]);
    const auto it = trial.labels.find(cfg.label);
    if (it == trial.labels.end()) {
      throw std::runtime_error("trial '" + files[i] + "' has no '" + cfg.label + "' label");
    }
    const features::FeatureVector fv = features::extract_trial(trial, family, band, chans, opt);
    fm.rows[i] = fv.values;
    fm.subjects[i] = trial.subject_id;
    fm.labels[i] = it->second;
    names[i] = fv.names;
  });

  fm.feature_names = names.front();
  for (const auto& n : names) {
    if (n != fm.feature_names) throw std::runtime_error("inconsistent feature layout across trials");
  }
  return fm;
}

void validate_feature_flags(const FeatureJobConfig& cfg) {
  usage_checked([&] { return features::family_from_name(cfg.family); });
  usage_checked([&] { return dsp::BandSpec::named(cfg.band); });
  usage_checked([&] { return channels_from_flag(cfg.channels); });
  require_usage(cfg.fraction > 0.0 && cfg.fraction <= 1.0, "--fraction must lie in (0,1]");
  require_usage(cfg.label == "valence" || cfg.label == "arousal",
                "--label must be valence or arousal");
}

csv::Metadata feature_meta(const FeatureJobConfig& cfg, const std::string& in_dir) {
  csv::Metadata meta = base_meta("features");
  meta.emplace_back("in", in_dir);
  meta.emplace_back("family", cfg.family);
  meta.emplace_back("band", cfg.band);
  meta.emplace_back("channels", cfg.channels);
  meta.emplace_back("fraction", fmt(cfg.fraction));
  meta.emplace_back("flat_as_one", cfg.flat_as_one ? "1" : "0");
  return meta;
}

void write_report(const std::string& path, const mlpipe::CvReport& report,
                  csv::Metadata meta) {
  meta.emplace_back("protocol", mlpipe::protocol_name(report.protocol));
  meta.emplace_back("label", report.label_name);
  meta.emplace_back("mean_accuracy", fmt(report.mean_accuracy));
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < report.fold_accuracy.size(); ++i) {
    rows.push_back({report.fold_id[i], fmt(report.fold_accuracy[i])});
  }
  rows.push_back({"mean", fmt(report.mean_accuracy)});
  csv::write_table(path, {"fold", "accuracy"}, rows, meta);
}

csv::Metadata classify_meta(const std::string& protocol, double C, const std::string& gamma,
                            std::size_t folds, bool shuffle, std::uint64_t seed) {
  csv::Metadata meta;
  meta.emplace_back("C", fmt(C));
  meta.emplace_back("gamma", gamma);
  meta.emplace_back("folds", std::to_string(folds));
  meta.emplace_back("requested_protocol", protocol);
  meta.emplace_back("shuffle_labels", shuffle ? "1" : "0");
  meta.emplace_back("seed", std::to_string(seed));
  return meta;
}

mlpipe::CvReport classify_matrix(const csv::FeatureMatrix& fm, const std::string& protocol,
                                 double C, double gamma, std::size_t folds,
                                 bool shuffle, std::uint64_t seed) {
  require_usage(folds >= 2, "--folds must be at least 2");
  mlpipe::CvConfig cfg;
  cfg.protocol = usage_checked([&] { return mlpipe::protocol_from_name(protocol); });
  cfg.folds = folds;
  cfg.svm.C = C;
  cfg.svm.gamma = gamma;
  cfg.label_name = fm.label_name;

  std::vector<double> ratings = fm.labels;
  if (shuffle) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = ratings.size(); i > 1; --i) {
      std::swap(ratings[i - 1], ratings[rng() % i]);
    }
  }
  return mlpipe::cross_validate(fm.rows, ratings, fm.subjects, cfg);
}

// key=value lines; flags given on the command line win
std::vector<std::string> apply_config_file(const std::vector<std::string>& argv_in) {
  std::vector<std::string> argv = argv_in;
  std::string config_path;
  for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
    if (argv[i] == "--config") {
      config_path = argv[i + 1];
      argv.erase(argv.begin() + static_cast<std::ptrdiff_t>(i),
                 argv.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
  }
  if (config_path.empty()) return argv;

  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config '" + config_path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    const std::string key = "--" + line.substr(0, eq);
    const bool given = std::any_of(argv.begin(), argv.end(), [&](const std::string& a) {
      return a == key || a.rfind(key + "=", 0) == 0;
    });
    if (!given) {
      // single-token form so both options and flags accept it
      argv.push_back(key + "=" + line.substr(eq + 1));
    }
  }
  return argv;
}

int run(const std::vector<std::string>& argv_vec) {
  CLI::App app{"fractal and multifractal analysis of 1-D time series"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "global RNG seed")->capture_default_str();

  // ---- synth ----
  auto* cmd_synth = app.add_subcommand("synth", "generate a synthetic series");
  cmd_synth->fallthrough();
  std::string sy_kind = "fgn", sy_out;
  double sy_hurst = 0.7, sy_rate = 128.0, sy_dim = 1.5, sy_gamma = 5.0, sy_spu = 0.0, sy_p = 0.75;
  std::size_t sy_n = 16384;
  int sy_depth = 16;
  cmd_synth->add_option("--kind", sy_kind, "white_noise|fgn|fbm|weierstrass|binomial_cascade")
      ->capture_default_str();
  cmd_synth->add_option("--hurst", sy_hurst, "Hurst exponent for fgn/fbm")->capture_default_str();
  cmd_synth->add_option("--n", sy_n, "series length")->capture_default_str();
  cmd_synth->add_option("--rate", sy_rate, "sampling rate in Hz")->capture_default_str();
  cmd_synth->add_option("--dim", sy_dim, "Weierstrass graph dimension")->capture_default_str();
  cmd_synth->add_option("--gamma", sy_gamma, "Weierstrass frequency ratio")->capture_default_str();
  cmd_synth->add_option("--samples-per-unit", sy_spu, "Weierstrass grid density (default n)");
  cmd_synth->add_option("--p", sy_p, "cascade weight")->capture_default_str();
  cmd_synth->add_option("--depth", sy_depth, "cascade depth")->capture_default_str();
  cmd_synth->add_option("--out", sy_out, "output series CSV")->required();

  // ---- bands ----
  auto* cmd_bands = app.add_subcommand("bands", "band-filter every channel of a trial");
  cmd_bands->fallthrough();
  std::string bd_in, bd_band = "alpha", bd_out;
  cmd_bands->add_option("--in", bd_in)->required();
  cmd_bands->add_option("--band", bd_band, "raw|alpha|beta|gamma")->capture_default_str();
  cmd_bands->add_option("--out", bd_out)->required();

  // ---- psd ----
  auto* cmd_psd = app.add_subcommand("psd", "64-band Welch power spectral density");
  cmd_psd->fallthrough();
  std::string ps_in, ps_channel, ps_out;
  cmd_psd->add_option("--in", ps_in)->required();
  cmd_psd->add_option("--channel", ps_channel, "channel name for trial inputs");
  cmd_psd->add_option("--out", ps_out)->required();

  // ---- mfd ----
  auto* cmd_mfd = app.add_subcommand("mfd", "multiscale fractal dimension fractogram");
  cmd_mfd->fallthrough();
  std::string mf_in, mf_channel, mf_out;
  int mf_max_scale = 274, mf_slope_window = 7;
  double mf_window_s = 15.0, mf_overlap = 0.5;
  bool mf_flat_one = false;
  cmd_mfd->add_option("--in", mf_in)->required();
  cmd_mfd->add_option("--channel", mf_channel);
  cmd_mfd->add_option("--max-scale", mf_max_scale)->capture_default_str();
  cmd_mfd->add_option("--slope-window", mf_slope_window)->capture_default_str();
  cmd_mfd->add_option("--window-s", mf_window_s)->capture_default_str();
  cmd_mfd->add_option("--overlap", mf_overlap)->capture_default_str();
  cmd_mfd->add_flag("--flat-as-one", mf_flat_one, "map constant windows to D=1");
  cmd_mfd->add_option("--out", mf_out)->required();

  // ---- hfd ----
  auto* cmd_hfd = app.add_subcommand("hfd", "Higuchi fractal dimension per window");
  cmd_hfd->fallthrough();
  std::string hf_in, hf_channel, hf_out;
  int hf_kmax = 32;
  double hf_window_s = 15.0, hf_overlap = 0.5;
  cmd_hfd->add_option("--in", hf_in)->required();
  cmd_hfd->add_option("--channel", hf_channel);
  cmd_hfd->add_option("--k-max", hf_kmax)->capture_default_str();
  cmd_hfd->add_option("--window-s", hf_window_s)->capture_default_str();
  cmd_hfd->add_option("--overlap", hf_overlap)->capture_default_str();
  cmd_hfd->add_option("--out", hf_out)->required();

  // ---- dfa ----
  auto* cmd_dfa = app.add_subcommand("dfa", "detrended fluctuation analysis");
  cmd_dfa->fallthrough();
  std::string df_in, df_channel, df_scales, df_out;
  bool df_both_ends = false;
  cmd_dfa->add_option("--in", df_in)->required();
  cmd_dfa->add_option("--channel", df_channel);
  cmd_dfa->add_option("--scales", df_scales, "lo:hi:count[log], default adapted to length");
  cmd_dfa->add_flag("--both-ends", df_both_ends, "segment from both series ends");
  cmd_dfa->add_option("--out", df_out, "optional per-scale fluctuation CSV");

  // ---- mfdfa ----
  auto* cmd_mfdfa = app.add_subcommand("mfdfa", "multifractal DFA spectrum");
  cmd_mfdfa->fallthrough();
  std::string mg_in, mg_channel, mg_scales = "30:500:10log", mg_q = "-5:5:16", mg_out;
  bool mg_both_ends = false;
  cmd_mfdfa->add_option("--in", mg_in)->required();
  cmd_mfdfa->add_option("--channel", mg_channel);
  cmd_mfdfa->add_option("--scales", mg_scales)->capture_default_str();
  cmd_mfdfa->add_option("--q", mg_q)->capture_default_str();
  cmd_mfdfa->add_flag("--both-ends", mg_both_ends);
  cmd_mfdfa->add_option("--out", mg_out)->required();

  // ---- adf ----
  auto* cmd_adf = app.add_subcommand("adf", "augmented Dickey-Fuller stationarity test");
  cmd_adf->fallthrough();
  std::string ad_in, ad_channel, ad_out;
  std::size_t ad_window = 0, ad_hop = 0;
  int ad_max_lags = -1;
  cmd_adf->add_option("--in", ad_in)->required();
  cmd_adf->add_option("--channel", ad_channel);
  cmd_adf->add_option("--window", ad_window, "rolling window in samples (0 = whole series)");
  cmd_adf->add_option("--hop", ad_hop, "rolling hop in samples (default window/2)");
  cmd_adf->add_option("--max-lags", ad_max_lags, "-1 selects Schwert bound + AIC pruning");
  cmd_adf->add_option("--out", ad_out);

  // ---- features ----
  auto* cmd_features = app.add_subcommand("features", "feature matrix from a trial directory");
  cmd_features->fallthrough();
  std::string ft_in, ft_out;
  FeatureJobConfig ft_cfg;
  cmd_features->add_option("--in", ft_in, "directory of trial CSV files")->required();
  cmd_features->add_option("--family", ft_cfg.family, "mfd|mfdfa|hfd|psd")->capture_default_str();
  cmd_features->add_option("--band", ft_cfg.band, "raw|alpha|beta|gamma")->capture_default_str();
  cmd_features->add_option("--channels", ft_cfg.channels, "left|right|comma list")
      ->capture_default_str();
  cmd_features->add_option("--label", ft_cfg.label, "valence|arousal")->capture_default_str();
  cmd_features->add_option("--fraction", ft_cfg.fraction, "trailing fraction for mfdfa")
      ->capture_default_str();
  cmd_features->add_flag("--flat-as-one", ft_cfg.flat_as_one);
  cmd_features->add_option("--out", ft_out)->required();

  // ---- classify ----
  auto* cmd_classify = app.add_subcommand("classify", "scaler + RBF-SVM cross validation");
  cmd_classify->fallthrough();
  std::string cl_features, cl_label, cl_protocol = "dependent", cl_gamma = "scale", cl_out;
  double cl_C = 1.0;
  std::size_t cl_folds = 5;
  bool cl_shuffle = false;
  cmd_classify->add_option("--features", cl_features, "feature matrix CSV")->required();
  cmd_classify->add_option("--label", cl_label, "label name (default: from the matrix header)");
  cmd_classify->add_option("--protocol", cl_protocol, "dependent|independent")
      ->capture_default_str();
  cmd_classify->add_option("--C", cl_C)->capture_default_str();
  cmd_classify->add_option("--gamma", cl_gamma, "positive value or 'scale'")->capture_default_str();
  cmd_classify->add_option("--folds", cl_folds)->capture_default_str();
  cmd_classify->add_flag("--shuffle-labels", cl_shuffle, "permute labels (chance-level check)");
  cmd_classify->add_option("--out", cl_out)->required();

  // ---- pipeline ----
  auto* cmd_pipeline = app.add_subcommand("pipeline", "features then classification");
  cmd_pipeline->fallthrough();
  std::string pl_in, pl_out, pl_features_out, pl_protocol = "dependent", pl_gamma = "scale";
  FeatureJobConfig pl_cfg;
  double pl_C = 1.0;
  std::size_t pl_folds = 5;
  bool pl_shuffle = false;
  cmd_pipeline->add_option("--in", pl_in, "directory of trial CSV files")->required();
  cmd_pipeline->add_option("--family", pl_cfg.family)->capture_default_str();
  cmd_pipeline->add_option("--band", pl_cfg.band)->capture_default_str();
  cmd_pipeline->add_option("--channels", pl_cfg.channels)->capture_default_str();
  cmd_pipeline->add_option("--label", pl_cfg.label)->capture_default_str();
  cmd_pipeline->add_option("--fraction", pl_cfg.fraction)->capture_default_str();
  cmd_pipeline->add_flag("--flat-as-one", pl_cfg.flat_as_one);
  cmd_pipeline->add_option("--protocol", pl_protocol)->capture_default_str();
  cmd_pipeline->add_option("--C", pl_C)->capture_default_str();
  cmd_pipeline->add_option("--gamma", pl_gamma)->capture_default_str();
  cmd_pipeline->add_option("--folds", pl_folds)->capture_default_str();
  cmd_pipeline->add_flag("--shuffle-labels", pl_shuffle);
  cmd_pipeline->add_option("--features-out", pl_features_out, "optional feature matrix CSV");
  cmd_pipeline->add_option("--out", pl_out)->required();

  std::vector<const char*> raw;
  raw.reserve(argv_vec.size());
  for (const auto& a : argv_vec) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 1;
  }

  if (cmd_synth->parsed()) {
    synth::GeneratorSpec gen;
    gen.kind = usage_checked([&] { return synth::kind_from_name(sy_kind); });
    gen.length = sy_n;
    gen.seed = seed;
    gen.rate_hz = sy_rate;
    gen.hurst = sy_hurst;
    gen.dimension = sy_dim;
    gen.gamma = sy_gamma;
    gen.samples_per_unit = sy_spu;
    gen.p = sy_p;
    gen.depth = sy_depth;
    const TimeSeries x = synth::generate(gen);

    csv::Metadata meta = base_meta("synth");
    meta.emplace_back("kind", sy_kind);
    meta.emplace_back("seed", std::to_string(seed));
    meta.emplace_back("rate", fmt(sy_rate));
    switch (gen.kind) {
      case synth::Kind::white_noise:
        meta.emplace_back("n", std::to_string(sy_n));
        break;
      case synth::Kind::fgn:
      case synth::Kind::fbm:
        meta.emplace_back("hurst", fmt(sy_hurst));
        meta.emplace_back("n", std::to_string(sy_n));
        break;
      case synth::Kind::weierstrass:
        meta.emplace_back("dim", fmt(sy_dim));
        meta.emplace_back("gamma", fmt(sy_gamma));
        meta.emplace_back("samples_per_unit",
                          fmt(sy_spu > 0.0 ? sy_spu : static_cast<double>(sy_n)));
        break;
      case synth::Kind::binomial_cascade:
        meta.emplace_back("p", fmt(sy_p));
        meta.emplace_back("depth", std::to_string(sy_depth));
        break;
    }
    csv::write_series(sy_out, x, meta);
    std::cout << "wrote " << x.size() << " samples to " << sy_out << "\n";
    return 0;
  }

  if (cmd_bands->parsed()) {
    Trial trial = csv::read_trial(bd_in);
    const dsp::BandSpec band = dsp::BandSpec::named(bd_band);
    for (auto& [name, series] : trial.channels) series = dsp::filter_band(series, band);
    csv::write_trial(bd_out, trial);
    std::cout << "wrote band '" << bd_band << "' trial to " << bd_out << "\n";
    return 0;
  }

  if (cmd_psd->parsed()) {
    const TimeSeries x = load_series(ps_in, ps_channel);
    const std::vector<double> psd = dsp::welch_psd(x, 64);
    csv::Metadata meta = base_meta("psd");
    meta.emplace_back("in", ps_in);
    meta.emplace_back("rate_hz", fmt(x.rate_hz));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t b = 0; b < psd.size(); ++b) {
      const double center = (static_cast<double>(b) + 0.5) * (x.rate_hz / 2.0) / 64.0;
      rows.push_back({std::to_string(b), fmt(center), fmt(psd[b])});
    }
    csv::write_table(ps_out, {"band", "center_hz", "psd"}, rows, meta);
    std::cout << "wrote 64 PSD bands to " << ps_out << "\n";
    return 0;
  }

  if (cmd_mfd->parsed()) {
    require_usage(mf_slope_window >= 3, "--slope-window must be at least 3");
    require_usage(mf_max_scale >= mf_slope_window, "--max-scale must cover the slope window");
    require_usage(mf_overlap >= 0.0 && mf_overlap < 1.0, "--overlap must lie in [0,1)");
    const TimeSeries x = load_series(mf_in, mf_channel);
    morphofd::FractogramOptions opt;
    opt.max_scale = mf_max_scale;
    opt.slope_window = mf_slope_window;
    opt.window_samples = static_cast<std::size_t>(std::llround(mf_window_s * x.rate_hz));
    opt.hop_samples = static_cast<std::size_t>(
        std::llround(static_cast<double>(opt.window_samples) * (1.0 - mf_overlap)));
    opt.flat_as_unit_dimension = mf_flat_one;
    const morphofd::Fractogram fg = morphofd::fractogram(x, opt);
    csv::Metadata meta = base_meta("mfd");
    meta.emplace_back("in", mf_in);
    if (!mf_channel.empty()) meta.emplace_back("channel", mf_channel);
    meta.emplace_back("max_scale", std::to_string(mf_max_scale));
    meta.emplace_back("window_samples", std::to_string(opt.window_samples));
    meta.emplace_back("overlap", fmt(mf_overlap));
    meta.emplace_back("flat_as_one", mf_flat_one ? "1" : "0");
    csv::write_fractogram(mf_out, fg, meta);
    std::cout << "wrote " << fg.scales.size() << "x" << fg.times.size() << " fractogram to "
              << mf_out << "\n";
    return 0;
  }

  if (cmd_hfd->parsed()) {
    require_usage(hf_kmax >= 2, "--k-max must be at least 2");
    require_usage(hf_overlap >= 0.0 && hf_overlap < 1.0, "--overlap must lie in [0,1)");
    const TimeSeries x = load_series(hf_in, hf_channel);
    const auto windows = fractalis::window_split(x, hf_window_s, hf_overlap);
    const auto starts = fractalis::window_starts(
        x.size(), static_cast<std::size_t>(std::llround(hf_window_s * x.rate_hz)),
        static_cast<std::size_t>(std::llround(hf_window_s * x.rate_hz * (1.0 - hf_overlap))));
    csv::Metadata meta = base_meta("hfd");
    meta.emplace_back("in", hf_in);
    meta.emplace_back("k_max", std::to_string(hf_kmax));
    meta.emplace_back("window_s", fmt(hf_window_s));
    meta.emplace_back("overlap", fmt(hf_overlap));
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      rows.push_back({std::to_string(starts[i]), fmt(morphofd::higuchi_fd(windows[i], hf_kmax))});
    }
    csv::write_table(hf_out, {"start", "hfd"}, rows, meta);
    std::cout << "wrote " << rows.size() << " HFD windows to " << hf_out << "\n";
    return 0;
  }

  if (cmd_dfa->parsed()) {
    const TimeSeries x = load_series(df_in, df_channel);
    const fluct::ScaleGrid grid = df_scales.empty() ? fluct::ScaleGrid::default_for(x.size())
                                                    : make_grid(parse_scale_spec(df_scales));
    fluct::SegmentOptions seg;
    seg.both_ends = df_both_ends;
    const fluct::DfaResult res = fluct::dfa(x, grid, seg);
    std::cout << "H = " << fmt(res.hurst) << " (r2 = " << fmt(res.fit.r_squared) << ")\n";
    const char* kind = res.hurst <= 1.0 ? "fGn" : "fBm";
    const double h_proc = res.hurst <= 1.0 ? res.hurst : res.hurst - 1.0;
    std::cout << "process: " << kind << " with H = " << fmt(h_proc) << "\n";
    if (!df_out.empty()) {
      csv::Metadata meta = base_meta("dfa");
      meta.emplace_back("in", df_in);
      meta.emplace_back("scales", df_scales.empty() ? "auto" : df_scales);
      meta.emplace_back("both_ends", df_both_ends ? "1" : "0");
      meta.emplace_back("H", fmt(res.hurst));
      meta.emplace_back("r2", fmt(res.fit.r_squared));
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < grid.scales.size(); ++i) {
        rows.push_back({std::to_string(grid.scales[i]), fmt(res.F[i])});
      }
      csv::write_table(df_out, {"scale", "F"}, rows, meta);
    }
    return 0;
  }

  if (cmd_mfdfa->parsed()) {
    const TimeSeries x = load_series(mg_in, mg_channel);
    const fluct::ScaleGrid grid = make_grid(parse_scale_spec(mg_scales));
    const fluct::QGrid qs = parse_q_spec(mg_q);
    fluct::SegmentOptions seg;
    seg.both_ends = mg_both_ends;
    const fluct::FluctuationField field = fluct::mfdfa(x, grid, qs, seg);
    const fluct::MultifractalSpectrum spec = fluct::spectrum(field);
    csv::Metadata meta = base_meta("mfdfa");
    meta.emplace_back("in", mg_in);
    meta.emplace_back("scales", mg_scales);
    meta.emplace_back("q", mg_q);
    meta.emplace_back("both_ends", mg_both_ends ? "1" : "0");
    meta.emplace_back("width", fmt(spec.width()));
    if (field.floored) meta.emplace_back("warning", "epsilon_floor_engaged");
    csv::write_spectrum(mg_out, field, spec, meta);
    std::cout << "spectrum width = " << fmt(spec.width()) << ", wrote " << mg_out << "\n";
    return 0;
  }

  if (cmd_adf->parsed()) {
    require_usage(ad_max_lags >= -1, "--max-lags must be -1 (auto) or non-negative");
    const TimeSeries x = load_series(ad_in, ad_channel);
    csv::Metadata meta = base_meta("adf");
    meta.emplace_back("in", ad_in);
    meta.emplace_back("max_lags", std::to_string(ad_max_lags));
    std::vector<std::vector<std::string>> rows;
    const auto row_of = [](std::size_t start, const stationarity::AdfResult& r) {
      return std::vector<std::string>{
          std::to_string(start),           fmt(r.statistic),
          std::to_string(r.lags_used),     fmt(r.critical_values.at(0.01)),
          fmt(r.critical_values.at(0.05)), fmt(r.critical_values.at(0.10)),
          r.reject_unit_root_at_5pct ? "1" : "0"};
    };
    if (ad_window == 0) {
      const stationarity::AdfResult r = stationarity::adf_test(x, ad_max_lags);
      rows.push_back(row_of(0, r));
      std::cout << "ADF statistic = " << fmt(r.statistic) << " (lags " << r.lags_used << "), "
                << (r.reject_unit_root_at_5pct ? "reject" : "fail to reject")
                << " unit root at 5%\n";
    } else {
      const std::size_t hop = ad_hop > 0 ? ad_hop : ad_window / 2;
      const stationarity::RollingAdf roll = stationarity::rolling_adf(x, ad_window, hop);
      std::size_t rejections = 0;
      for (std::size_t i = 0; i < roll.starts.size(); ++i) {
        rows.push_back(row_of(roll.starts[i], roll.results[i]));
        rejections += roll.results[i].reject_unit_root_at_5pct ? 1 : 0;
      }
      meta.emplace_back("window", std::to_string(ad_window));
      meta.emplace_back("hop", std::to_string(hop));
      std::cout << rejections << "/" << roll.starts.size() << " windows reject the unit root\n";
    }
    if (!ad_out.empty()) {
      csv::write_table(ad_out, {"start", "statistic", "lags", "cv_1pct", "cv_5pct", "cv_10pct",
                                "reject_5pct"},
                       rows, meta);
    }
    return 0;
  }

  if (cmd_features->parsed()) {
    validate_feature_flags(ft_cfg);
    const csv::FeatureMatrix fm = extract_directory(ft_in, ft_cfg);
    csv::write_feature_matrix(ft_out, fm, feature_meta(ft_cfg, ft_in));
    std::cout << "wrote " << fm.rows.size() << " x " << fm.feature_names.size()
              << " feature matrix to " << ft_out << "\n";
    return 0;
  }

  if (cmd_classify->parsed()) {
    const double gamma_value = parse_gamma_flag(cl_gamma);
    usage_checked([&] { return mlpipe::protocol_from_name(cl_protocol); });
    const csv::FeatureMatrix fm = csv::read_feature_matrix(cl_features);
    if (!cl_label.empty() && cl_label != fm.label_name) {
      throw UsageError("--label '" + cl_label + "' does not match matrix label '" + fm.label_name +
                       "'");
    }
    const mlpipe::CvReport report =
        classify_matrix(fm, cl_protocol, cl_C, gamma_value, cl_folds, cl_shuffle, seed);
    csv::Metadata meta = base_meta("classify");
    meta.emplace_back("features", cl_features);
    for (auto& kv : classify_meta(cl_protocol, cl_C, cl_gamma, cl_folds, cl_shuffle, seed)) {
      meta.push_back(std::move(kv));
    }
    write_report(cl_out, report, meta);
    std::cout << "mean accuracy (" << mlpipe::protocol_name(report.protocol)
              << ", " << report.label_name << ") = " << fmt(report.mean_accuracy) << "\n";
    return 0;
  }

  if (cmd_pipeline->parsed()) {
    validate_feature_flags(pl_cfg);
    const double gamma_value = parse_gamma_flag(pl_gamma);
    usage_checked([&] { return mlpipe::protocol_from_name(pl_protocol); });
    const csv::FeatureMatrix fm = extract_directory(pl_in, pl_cfg);
    if (!pl_features_out.empty()) {
      csv::write_feature_matrix(pl_features_out, fm, feature_meta(pl_cfg, pl_in));
    }
    const mlpipe::CvReport report =
        classify_matrix(fm, pl_protocol, pl_C, gamma_value, pl_folds, pl_shuffle, seed);
    csv::Metadata meta = feature_meta(pl_cfg, pl_in);
    meta.emplace_back("subcommand", "pipeline");
    for (auto& kv : classify_meta(pl_protocol, pl_C, pl_gamma, pl_folds, pl_shuffle, seed)) {
      meta.push_back(std::move(kv));
    }
    write_report(pl_out, report, meta);
    std::cout << "mean accuracy (" << mlpipe::protocol_name(report.protocol)
              << ", " << report.label_name << ") = " << fmt(report.mean_accuracy) << "\n";
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    return run(apply_config_file(args));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
