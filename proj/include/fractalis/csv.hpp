#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fractalis/core.hpp"
#include "fractalis/fluctuation.hpp"
#include "fractalis/mlpipe.hpp"
#include "fractalis/morphofd.hpp"

namespace fractalis::csv {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

using Metadata = std::vector<std::pair<std::string, std::string>>;

// "# key=value" header lines; later duplicate keys win on read.
std::string render_metadata(const Metadata& meta);
Metadata collect_metadata(const std::vector<std::string>& lines);

// --- single-column series files -------------------------------------------

void write_series(const std::string& path, const TimeSeries& x, const Metadata& extra = {});
TimeSeries read_series(const std::string& path);

// --- trial files -----------------------------------------------------------
// Line 1: "# rate_hz=<r> subject=<id> valence=<v> arousal=<a>",
// line 2: channel names, then one sample per channel per row.

void write_trial(const std::string& path, const Trial& trial);
Trial read_trial(const std::string& path);
bool looks_like_trial(const std::string& path);

// --- feature matrices -------------------------------------------------------
// Header row of feature names plus "subject" and a trailing "label" column.

struct FeatureMatrix {
  std::vector<std::string> feature_names;
  mlpipe::Matrix rows;
  std::vector<std::string> subjects;
  std::vector<double> labels;
  std::string label_name{"label"};
};

void write_feature_matrix(const std::string& path, const FeatureMatrix& fm,
                          const Metadata& extra = {});
FeatureMatrix read_feature_matrix(const std::string& path);

// --- analysis outputs --------------------------------------------------------

void write_fractogram(const std::string& path, const morphofd::Fractogram& fg,
                      const Metadata& extra = {});
morphofd::Fractogram read_fractogram(const std::string& path);

// columns q, H, t, h, D; the largest moment's row leaves h and D empty
void write_spectrum(const std::string& path, const fluctuation::FluctuationField& field,
                    const fluctuation::MultifractalSpectrum& spec, const Metadata& extra = {});
fluctuation::MultifractalSpectrum read_spectrum(const std::string& path);

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows, const Metadata& extra = {});

struct Table {
  Metadata meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(const std::string& path);

std::vector<std::string> list_csv_files(const std::string& directory);

}  // namespace fractalis::csv
