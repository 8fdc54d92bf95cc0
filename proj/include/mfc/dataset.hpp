#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mfc/common.hpp"
#include "mfc/metric.hpp"
#include "mfc/rng.hpp"

namespace mfc {

// Line-oriented input formats.
//   Vectors:   whitespace-separated reals; blank lines are skipped.
//   Strings:   one string per line, bytes as-is (a trailing '\r' is dropped).
//   Sets:      whitespace-separated tokens, interned to ids in order of first
//              appearance in the file; a blank line is the empty set.
//   Sequences: one fixed-length symbol string per line; blank lines skipped.
enum class Format { Vectors, Strings, Sets, Sequences };

inline std::string_view to_string(Format f) {
  switch (f) {
    case Format::Vectors: return "vectors";
    case Format::Strings: return "strings";
    case Format::Sets: return "sets";
    case Format::Sequences: return "sequences";
  }
  return "?";
}

inline std::optional<Format> parse_format(std::string_view name) {
  for (auto f : {Format::Vectors, Format::Strings, Format::Sets, Format::Sequences}) {
    if (name == to_string(f)) return f;
  }
  return std::nullopt;
}

inline bool format_supports(Format f, MetricKind m) {
  switch (f) {
    case Format::Vectors: return m == MetricKind::Euclidean || m == MetricKind::ChebyshevLinf;
    case Format::Strings: return m == MetricKind::Levenshtein;
    case Format::Sets: return m == MetricKind::Jaccard;
    case Format::Sequences: return m == MetricKind::Hamming;
  }
  return false;
}

struct DatasetSpec {
  std::string path;
  Format format = Format::Vectors;
  MetricKind metric = MetricKind::Euclidean;
  std::optional<std::size_t> sample_size;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<std::string> split_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

inline bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

inline std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < s.size()) {
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    const std::size_t start = k;
    while (k < s.size() && s[k] != ' ' && s[k] != '\t') ++k;
    if (k > start) out.push_back(s.substr(start, k - start));
  }
  return out;
}

inline std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace detail

/// Parses every row of `in` in file order. Never evaluates a distance.
inline std::vector<Point> parse_points(std::istream& in, Format format) {
  const auto lines = detail::split_lines(in);
  std::vector<Point> points;
  std::unordered_map<std::string, std::uint32_t> interned;
  std::optional<std::size_t> width;

  for (std::size_t k = 0; k < lines.size(); ++k) {
    const std::string& line = lines[k];
    const std::size_t line_no = k + 1;
    switch (format) {
      case Format::Vectors: {
        if (detail::blank(line)) continue;
        DenseVector v;
        for (auto tok : detail::tokens(line)) {
          double x = 0.0;
          auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
          if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            throw ParseError(detail::at_line(line_no) + "not a number: '" + std::string(tok) + "'");
          }
          v.coords.push_back(x);
        }
        if (width && *width != v.coords.size()) {
          throw ParseError(detail::at_line(line_no) + "expected " + std::to_string(*width) + " values, found " +
                           std::to_string(v.coords.size()));
        }
        width = v.coords.size();
        points.emplace_back(std::move(v));
        break;
      }
      case Format::Strings:
        points.emplace_back(Text{line});
        break;
      case Format::Sets: {
        TokenSet s;
        for (auto tok : detail::tokens(line)) {
          auto [it, fresh] = interned.try_emplace(std::string(tok), static_cast<std::uint32_t>(interned.size()));
          s.ids.push_back(it->second);
        }
        std::sort(s.ids.begin(), s.ids.end());
        s.ids.erase(std::unique(s.ids.begin(), s.ids.end()), s.ids.end());
        points.emplace_back(std::move(s));
        break;
      }
      case Format::Sequences: {
        if (detail::blank(line)) continue;
        if (width && *width != line.size()) {
          throw ParseError(detail::at_line(line_no) + "sequence length " + std::to_string(line.size()) +
                           " differs from " + std::to_string(*width));
        }
        width = line.size();
        points.emplace_back(Sequence{line});
        break;
      }
    }
  }
  return points;
}

/// Seeded shuffle of all rows (Fisher-Yates over Rng), then the first
/// sample_size rows. Without a sample size every row is kept, in shuffled
/// order.
inline std::vector<Point> sample_points(std::vector<Point> rows, std::optional<std::size_t> sample_size,
                                        std::uint64_t seed) {
  if (sample_size && *sample_size > rows.size()) {
    throw ArgumentError("sample size " + std::to_string(*sample_size) + " exceeds " + std::to_string(rows.size()) +
                        " rows");
  }
  if (sample_size && *sample_size == 0) throw ArgumentError("sample size must be positive");
  Rng rng(seed);
  rng.shuffle(rows);
  if (sample_size) rows.resize(*sample_size);
  return rows;
}

inline MetricSpace load_dataset(std::istream& in, const DatasetSpec& spec) {
  if (!format_supports(spec.format, spec.metric)) {
    throw ConfigError("format " + std::string(to_string(spec.format)) + " does not support metric " +
                      std::string(to_string(spec.metric)));
  }
  auto rows = parse_points(in, spec.format);
  if (rows.empty()) throw ParseError("dataset has no rows");
  return MetricSpace(sample_points(std::move(rows), spec.sample_size, spec.seed), spec.metric);
}

inline MetricSpace load_dataset(const DatasetSpec& spec) {
  std::ifstream in(spec.path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open dataset '" + spec.path + "'");
  try {
    return load_dataset(in, spec);
  } catch (const ParseError& e) {
    throw ParseError(spec.path + ": " + e.what());
  }
}

// Synthetic data, all driven by Rng.
namespace synthetic {

inline std::vector<Point> uniform_vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    DenseVector v;
    v.coords.resize(dim);
    for (auto& x : v.coords) x = rng.unit();
    out.emplace_back(std::move(v));
  }
  return out;
}

inline std::string random_word(Rng& rng, std::size_t length, std::size_t alphabet) {
  std::string s(length, 'a');
  for (auto& c : s) c = static_cast<char>('a' + rng.below(alphabet));
  return s;
}

inline std::vector<Point> random_strings(std::size_t n, std::size_t min_len, std::size_t max_len,
                                         std::size_t alphabet, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto len = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_len), static_cast<std::int64_t>(max_len)));
    out.emplace_back(Text{random_word(rng, len, alphabet)});
  }
  return out;
}

inline std::vector<Point> random_sequences(std::size_t n, std::size_t length, std::size_t alphabet,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(Sequence{random_word(rng, length, alphabet)});
  return out;
}

inline std::vector<Point> random_sets(std::size_t n, std::size_t universe, std::size_t min_size,
                                      std::size_t max_size, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto size = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_size), static_cast<std::int64_t>(max_size)));
    TokenSet s;
    for (std::size_t k = 0; k < size; ++k) s.ids.push_back(static_cast<std::uint32_t>(rng.below(universe)));
    std::sort(s.ids.begin(), s.ids.end());
    s.ids.erase(std::unique(s.ids.begin(), s.ids.end()), s.ids.end());
    out.emplace_back(std::move(s));
  }
  return out;
}

/// A small random space of the given metric, for property tests and sweeps.
inline MetricSpace random_space(MetricKind metric, std::size_t n, std::uint64_t seed, std::size_t dim = 4) {
  switch (metric) {
    case MetricKind::Euclidean:
    case MetricKind::ChebyshevLinf: return MetricSpace(uniform_vectors(n, dim, seed), metric);
    case MetricKind::Hamming: return MetricSpace(random_sequences(n, 4 * dim, 4, seed), metric);
    case MetricKind::Jaccard: return MetricSpace(random_sets(n, 8 * dim, 1, 2 * dim, seed), metric);
    case MetricKind::Levenshtein: return MetricSpace(random_strings(n, 1, 3 * dim, 4, seed), metric);
  }
  throw ArgumentError("unknown metric");
}

}  // namespace synthetic

/// One line of a results table.
struct ResultRow {
  std::string algorithm;
  std::size_t b = 0;
  double tree_weight = 0.0;
  double forest_weight = 0.0;
  std::optional<double> opt_weight;
  double alpha = 1.0;
  std::optional<double> cost_ratio;
  std::optional<double> completion_ratio;
  std::uint64_t distance_calls = 0;
  double elapsed_ms = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kResultsHeader =
    "algorithm,b,tree_weight,forest_weight,opt_weight,alpha,cost_ratio,completion_ratio,distance_calls,elapsed_ms,seed";

// %.12g, the precision of the results table.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string format_row(const ResultRow& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
  std::string out = r.algorithm;
  out += ',' + std::to_string(r.b);
  out += ',' + format_real(r.tree_weight);
  out += ',' + format_real(r.forest_weight);
  out += ',' + opt(r.opt_weight);
  out += ',' + format_real(r.alpha);
  out += ',' + opt(r.cost_ratio);
  out += ',' + opt(r.completion_ratio);
  out += ',' + std::to_string(r.distance_calls);
  out += ',' + format_real(r.elapsed_ms);
  out += ',' + std::to_string(r.seed);
  return out;
}

inline void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

inline void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ArgumentError("cannot write results to '" + path + "'");
  write_results(out, rows);
  if (!out) throw ArgumentError("failed writing results to '" + path + "'");
}

/// Appends rows, writing the header first when the file is new or empty.
inline void append_results(const std::vector<ResultRow>& rows, const std::string& path) {
  bool fresh = true;
  {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    fresh = !probe || probe.tellg() == 0;
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw ArgumentError("cannot write results to '" + path + "'");
  if (fresh) out << kResultsHeader << '\n';
  for (const auto& r : rows) out << format_row(r) << '\n';
}

inline std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw ParseError("results: missing header");
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 11) throw ParseError("results: line " + std::to_string(line_no) + ": expected 11 fields");
    auto real = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return std::stod(s);
    };
    ResultRow r;
    r.algorithm = cells[0];
    r.b = std::stoull(cells[1]);
    r.tree_weight = std::stod(cells[2]);
    r.forest_weight = std::stod(cells[3]);
    r.opt_weight = real(cells[4]);
    r.alpha = std::stod(cells[5]);
    r.cost_ratio = real(cells[6]);
    r.completion_ratio = real(cells[7]);
    r.distance_calls = std::stoull(cells[8]);
    r.elapsed_ms = std::stod(cells[9]);
    r.seed = std::stoull(cells[10]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mfc
