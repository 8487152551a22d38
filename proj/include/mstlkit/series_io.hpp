#pragma once

// File formats: delimiter-separated series files (header row, optional
// timestamp column, empty cell = missing), corpus CSVs with ground-truth
// components, decomposition output CSVs, and JSON-lines corpus manifests.
// All writers go through an atomic temp-file + rename.
//
// Error convention: unreadable/unwritable files throw std::runtime_error;
// malformed content throws std::invalid_argument.

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "series.hpp"

namespace mstlkit::io {

struct InputSeries {
  std::vector<std::string> timestamps;  // empty when the file has no time column
  std::vector<double> values;           // NaN marks a missing observation
  std::string value_column;
};

// One corpus entry: a composite series plus its ground-truth components.
struct CorpusSeries {
  std::vector<double> composite;
  std::vector<double> trend;
  std::vector<std::string> seasonal_names;
  std::vector<std::vector<double>> seasonals;
  std::vector<double> remainder;
};

namespace detail {

// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline char detect_delimiter(const std::string& header) {
  char best = ',';
  std::size_t best_count = 0;
  for (char cand : {',', ';', '\t'}) {
    const std::size_t count = static_cast<std::size_t>(
        std::count(header.begin(), header.end(), cand));
    if (count > best_count) {
      best_count = count;
      best = cand;
    }
  }
  return best;
}

inline std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

inline bool is_missing_cell(const std::string& cell) {
  if (cell.empty()) return true;
  std::string lower;
  for (char c : cell) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return lower == "na" || lower == "nan";
}

inline double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
  if (is_missing_cell(cell)) return std::nan("");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("cannot parse '" + cell + "' in column " + column + ", data row " +
                                std::to_string(row + 1));
  return v;
}

// Non-comment, non-blank lines of a text file, with trailing CR stripped.
inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace detail

// Writes `content` to `path` atomically: a sibling temp file is written,
// flushed, and renamed over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() +
                                   ": " + ec.message());
}

// Reads a series file. `column` selects the value column by header name; when
// empty, a one-column file is the value series and a two-column file is read
// as (timestamp, value). More columns require an explicit `column`. The
// first column doubles as timestamps whenever it is not the value column.
inline InputSeries read_series_csv(const std::filesystem::path& path,
                                   const std::string& column = "") {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) throw std::invalid_argument(path.string() + ": empty file");
  const char delim = detail::detect_delimiter(lines[0]);
  const std::vector<std::string> header = detail::split_line(lines[0], delim);

  std::size_t value_idx = header.size();
  if (!column.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == column) value_idx = c;
    if (value_idx == header.size())
      throw std::invalid_argument(path.string() + ": no column named '" + column + "'");
  } else if (header.size() == 1) {
    value_idx = 0;
  } else if (header.size() == 2) {
    value_idx = 1;
  } else {
    throw std::invalid_argument(path.string() +
                                ": several columns; select one with --column");
  }
  const bool has_time = header.size() >= 2 && value_idx != 0;

  InputSeries s;
  s.value_column = header[value_idx];
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = detail::split_line(lines[r], delim);
    if (cells.size() != header.size())
      throw std::invalid_argument(path.string() + ": data row " + std::to_string(r) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
    s.values.push_back(detail::parse_cell(cells[value_idx], r - 1, s.value_column));
    if (has_time) s.timestamps.push_back(cells[0]);
  }
  if (s.values.size() < 3)
    throw std::invalid_argument(path.string() + ": need at least 3 data rows, found " +
                                std::to_string(s.values.size()));
  return s;
}

// Decomposition output: columns t, data, trend, seasonal_<period>...,
// remainder. `comments` become '#'-prefixed header lines.
inline void write_decomposition_csv(const std::filesystem::path& path, const Decomposition& d,
                                    const std::vector<std::string>& timestamps = {},
                                    const std::vector<std::string>& comments = {}) {
  const std::size_t n = d.data.size();
  std::string out;
  out.reserve(64 * (n + 2));
  for (const std::string& c : comments) out += "# " + c + "\n";
  out += "t,data,trend";
  for (int p : d.periods) out += ",seasonal_" + std::to_string(p);
  out += ",remainder\n";
  for (std::size_t t = 0; t < n; ++t) {
    out += timestamps.empty() ? std::to_string(t + 1) : timestamps[t];
    out += ',';
    out += detail::format_double(d.data[t]);
    out += ',';
    out += detail::format_double(d.trend[t]);
    for (const auto& s : d.seasonals) {
      out += ',';
      out += detail::format_double(s[t]);
    }
    out += ',';
    out += detail::format_double(d.remainder[t]);
    out += '\n';
  }
  atomic_write(path, out);
}

// Corpus entry: columns t, composite, trend, <seasonal names>..., remainder.
inline void write_corpus_csv(const std::filesystem::path& path, const CorpusSeries& series,
                             const std::vector<std::string>& comments = {}) {
  const std::size_t n = series.composite.size();
  std::string out;
  out.reserve(96 * (n + 2));
  for (const std::string& c : comments) out += "# " + c + "\n";
  out += "t,composite,trend";
  for (const std::string& name : series.seasonal_names) out += "," + name;
  out += ",remainder\n";
  for (std::size_t t = 0; t < n; ++t) {
    out += std::to_string(t + 1);
    out += ',';
    out += detail::format_double(series.composite[t]);
    out += ',';
    out += detail::format_double(series.trend[t]);
    for (const auto& s : series.seasonals) {
      out += ',';
      out += detail::format_double(s[t]);
    }
    out += ',';
    out += detail::format_double(series.remainder[t]);
    out += '\n';
  }
  atomic_write(path, out);
}

inline CorpusSeries read_corpus_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty()) throw std::invalid_argument(path.string() + ": empty file");
  const char delim = detail::detect_delimiter(lines[0]);
  const std::vector<std::string> header = detail::split_line(lines[0], delim);

  CorpusSeries s;
  std::size_t composite_idx = header.size(), trend_idx = header.size(),
              remainder_idx = header.size();
  std::vector<std::size_t> seasonal_idx;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "composite") composite_idx = c;
    else if (header[c] == "trend") trend_idx = c;
    else if (header[c] == "remainder") remainder_idx = c;
    else if (header[c].rfind("seasonal", 0) == 0) {
      seasonal_idx.push_back(c);
      s.seasonal_names.push_back(header[c]);
    }
  }
  if (composite_idx == header.size() || trend_idx == header.size() ||
      remainder_idx == header.size())
    throw std::invalid_argument(path.string() +
                                ": corpus file needs composite, trend, and remainder columns");
  s.seasonals.resize(seasonal_idx.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::vector<std::string> cells = detail::split_line(lines[r], delim);
    if (cells.size() != header.size())
      throw std::invalid_argument(path.string() + ": data row " + std::to_string(r) +
                                  " has the wrong cell count");
    s.composite.push_back(detail::parse_cell(cells[composite_idx], r - 1, "composite"));
    s.trend.push_back(detail::parse_cell(cells[trend_idx], r - 1, "trend"));
    s.remainder.push_back(detail::parse_cell(cells[remainder_idx], r - 1, "remainder"));
    for (std::size_t k = 0; k < seasonal_idx.size(); ++k)
      s.seasonals[k].push_back(detail::parse_cell(cells[seasonal_idx[k]], r - 1, s.seasonal_names[k]));
  }
  if (s.composite.empty()) throw std::invalid_argument(path.string() + ": no data rows");
  return s;
}

// Manifest: one JSON object per line describing one corpus series.
inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<nlohmann::json>& entries) {
  std::string out;
  for (const auto& e : entries) out += e.dump() + "\n";
  atomic_write(path, out);
}

inline std::vector<nlohmann::json> read_manifest(const std::filesystem::path& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  std::vector<nlohmann::json> entries;
  entries.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      entries.push_back(nlohmann::json::parse(lines[i]));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(path.string() + ": manifest line " + std::to_string(i + 1) +
                                  ": " + e.what());
    }
  }
  return entries;
}

}  // namespace mstlkit::io
