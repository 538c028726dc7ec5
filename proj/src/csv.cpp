#include "fractalis/csv.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fractalis::csv {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream iss(line);
  while (std::getline(iss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

void parse_kv_into(const std::string& text, Metadata& meta) {
  std::istringstream iss(text);
  std::string token;
  while (iss >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    meta.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
}

std::string meta_value(const Metadata& meta, const std::string& key) {
  std::string value;
  bool found = false;
  for (const auto& [k, v] : meta) {
    if (k == key) {
      value = v;
      found = true;
    }
  }
  if (!found) throw std::runtime_error("metadata key '" + key + "' missing");
  return value;
}

bool meta_has(const Metadata& meta, const std::string& key) {
  for (const auto& [k, v] : meta) {
    if (k == key) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first != last && *first == ' ') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw std::runtime_error("malformed number '" + s + "'");
  }
  return v;
}

std::string render_metadata(const Metadata& meta) {
  std::string out;
  for (const auto& [k, v] : meta) {
    out += "# " + k + "=" + v + "\n";
  }
  return out;
}

Metadata collect_metadata(const std::vector<std::string>& lines) {
  Metadata meta;
  for (const auto& line : lines) {
    if (line.empty() || line[0] != '#') break;
    parse_kv_into(line.substr(1), meta);
  }
  return meta;
}

void write_series(const std::string& path, const TimeSeries& x, const Metadata& extra) {
  auto out = open_out(path);
  Metadata meta = extra;
  meta.emplace_back("rate_hz", format_double(x.rate_hz));
  out << render_metadata(meta);
  out << "value\n";
  for (double v : x.samples) out << format_double(v) << "\n";
}

TimeSeries read_series(const std::string& path) {
  const auto lines = read_lines(path);
  const Metadata meta = collect_metadata(lines);

  TimeSeries x;
  x.rate_hz = meta_has(meta, "rate_hz") ? parse_double(meta_value(meta, "rate_hz")) : 1.0;
  bool header_seen = false;
  for (const auto& line : lines) {
    if (line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "value") continue;  // optional column header
    }
    x.samples.push_back(parse_double(line));
  }
  x.validate();
  return x;
}

void write_trial(const std::string& path, const Trial& trial) {
  trial.validate();
  auto out = open_out(path);
  out << "# rate_hz=" << format_double(trial.channels.front().second.rate_hz)
      << " subject=" << trial.subject_id;
  for (const auto& [dim, rating] : trial.labels) {
    out << " " << dim << "=" << format_double(rating);
  }
  out << "\n";
  for (std::size_t c = 0; c < trial.channels.size(); ++c) {
    out << trial.channels[c].first << (c + 1 < trial.channels.size() ? "," : "\n");
  }
  const std::size_t n = trial.channels.front().second.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < trial.channels.size(); ++c) {
      out << format_double(trial.channels[c].second.samples[i])
          << (c + 1 < trial.channels.size() ? "," : "\n");
    }
  }
}

Trial read_trial(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.size() < 3 || lines[0][0] != '#') {
    throw std::runtime_error("trial file '" + path + "': missing metadata header");
  }
  Metadata meta;
  parse_kv_into(lines[0].substr(1), meta);

  Trial trial;
  trial.subject_id = meta_value(meta, "subject");
  const double rate = parse_double(meta_value(meta, "rate_hz"));
  for (const auto& [k, v] : meta) {
    if (k == "subject" || k == "rate_hz") continue;
    trial.labels[k] = parse_double(v);
  }

  const std::vector<std::string> names = split(lines[1], ',');
  trial.channels.resize(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    trial.channels[c].first = names[c];
    trial.channels[c].second.rate_hz = rate;
    trial.channels[c].second.samples.reserve(lines.size() - 2);
  }
  for (std::size_t r = 2; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split(lines[r], ',');
    if (fields.size() != names.size()) {
      throw std::runtime_error("trial file '" + path + "': ragged row " + std::to_string(r + 1));
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
      trial.channels[c].second.samples.push_back(parse_double(fields[c]));
    }
  }
  trial.validate();
  return trial;
}

bool looks_like_trial(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  return first.rfind("#", 0) == 0 && first.find("subject=") != std::string::npos;
}

void write_feature_matrix(const std::string& path, const FeatureMatrix& fm, const Metadata& extra) {
  auto out = open_out(path);
  Metadata meta = extra;
  meta.emplace_back("label", fm.label_name);
  out << render_metadata(meta);
  for (const auto& name : fm.feature_names) out << name << ",";
  out << "subject,label\n";
  for (std::size_t r = 0; r < fm.rows.size(); ++r) {
    for (double v : fm.rows[r]) out << format_double(v) << ",";
    out << fm.subjects[r] << "," << format_double(fm.labels[r]) << "\n";
  }
}

FeatureMatrix read_feature_matrix(const std::string& path) {
  const auto lines = read_lines(path);
  const Metadata meta = collect_metadata(lines);

  FeatureMatrix fm;
  if (meta_has(meta, "label")) fm.label_name = meta_value(meta, "label");

  std::size_t r = 0;
  while (r < lines.size() && lines[r][0] == '#') ++r;
  if (r >= lines.size()) throw std::runtime_error("feature matrix '" + path + "': no header");
  std::vector<std::string> header = split(lines[r], ',');
  if (header.size() < 3 || header[header.size() - 1] != "label" ||
      header[header.size() - 2] != "subject") {
    throw std::runtime_error("feature matrix '" + path + "': expected trailing subject,label columns");
  }
  fm.feature_names.assign(header.begin(), header.end() - 2);

  for (++r; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split(lines[r], ',');
    if (fields.size() != header.size()) {
      throw std::runtime_error("feature matrix '" + path + "': ragged row");
    }
    std::vector<double> row(fm.feature_names.size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = parse_double(fields[c]);
    fm.rows.push_back(std::move(row));
    fm.subjects.push_back(fields[fields.size() - 2]);
    fm.labels.push_back(parse_double(fields.back()));
  }
  return fm;
}

void write_fractogram(const std::string& path, const morphofd::Fractogram& fg,
                      const Metadata& extra) {
  auto out = open_out(path);
  Metadata meta = extra;
  meta.emplace_back("slope_window", std::to_string(fg.slope_window_w));
  out << render_metadata(meta);
  out << "scale";
  for (std::size_t t : fg.times) out << ",t" << t;
  out << "\n";
  for (std::size_t si = 0; si < fg.scales.size(); ++si) {
    out << fg.scales[si];
    for (std::size_t wi = 0; wi < fg.times.size(); ++wi) {
      out << "," << format_double(fg.dimensions[si][wi]);
    }
    out << "\n";
  }
}

morphofd::Fractogram read_fractogram(const std::string& path) {
  const auto lines = read_lines(path);
  const Metadata meta = collect_metadata(lines);

  morphofd::Fractogram fg;
  if (meta_has(meta, "slope_window")) {
    fg.slope_window_w = static_cast<int>(parse_double(meta_value(meta, "slope_window")));
  }
  std::size_t r = 0;
  while (r < lines.size() && lines[r][0] == '#') ++r;
  const std::vector<std::string> header = split(lines[r], ',');
  for (std::size_t c = 1; c < header.size(); ++c) {
    fg.times.push_back(static_cast<std::size_t>(parse_double(header[c].substr(1))));
  }
  for (++r; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split(lines[r], ',');
    fg.scales.push_back(static_cast<int>(parse_double(fields[0])));
    std::vector<double> row(fields.size() - 1);
    for (std::size_t c = 1; c < fields.size(); ++c) row[c - 1] = parse_double(fields[c]);
    fg.dimensions.push_back(std::move(row));
  }
  return fg;
}

void write_spectrum(const std::string& path, const fluctuation::FluctuationField& field,
                    const fluctuation::MultifractalSpectrum& spec, const Metadata& extra) {
  auto out = open_out(path);
  out << render_metadata(extra);
  out << "q,H,t,h,D\n";
  for (std::size_t i = 0; i < spec.q.size(); ++i) {
    out << format_double(spec.q[i]) << "," << format_double(field.H[i]) << ","
        << format_double(spec.t[i]) << ",";
    if (i < spec.h.size()) {
      out << format_double(spec.h[i]) << "," << format_double(spec.D[i]);
    } else {
      out << ",";
    }
    out << "\n";
  }
}

fluctuation::MultifractalSpectrum read_spectrum(const std::string& path) {
  const auto lines = read_lines(path);
  fluctuation::MultifractalSpectrum spec;
  std::size_t r = 0;
  while (r < lines.size() && lines[r][0] == '#') ++r;
  for (++r; r < lines.size(); ++r) {
    const std::vector<std::string> fields = split(lines[r], ',');
    if (fields.size() != 5) throw std::runtime_error("spectrum '" + path + "': ragged row");
    spec.q.push_back(parse_double(fields[0]));
    spec.t.push_back(parse_double(fields[2]));
    if (!fields[3].empty()) {
      spec.h.push_back(parse_double(fields[3]));
      spec.D.push_back(parse_double(fields[4]));
    }
  }
  return spec;
}

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<std::string>>& rows, const Metadata& extra) {
  auto out = open_out(path);
  out << render_metadata(extra);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
  }
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::invalid_argument("write_table: ragged row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
  }
}

Table read_table(const std::string& path) {
  const auto lines = read_lines(path);
  Table table;
  table.meta = collect_metadata(lines);
  std::size_t r = 0;
  while (r < lines.size() && lines[r][0] == '#') ++r;
  if (r >= lines.size()) throw std::runtime_error("table '" + path + "': no header row");
  table.columns = split(lines[r], ',');
  for (++r; r < lines.size(); ++r) {
    auto fields = split(lines[r], ',');
    if (fields.size() != table.columns.size()) {
      throw std::runtime_error("table '" + path + "': ragged row");
    }
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::vector<std::string> list_csv_files(const std::string& directory) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("'" + directory + "' is not a directory");
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace fractalis::csv
