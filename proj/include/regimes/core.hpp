#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace regimes {

// Error taxonomy used across the library. The CLI maps these to exit codes
// (config 2, data 3, numerical 4).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Calendar timestamp with month or day resolution ("1943-02" or "1943-02-17").
struct TimePoint {
  int year = 0;
  int month = 1;
  int day = 1;
  bool has_day = false;

  friend bool operator==(const TimePoint& a, const TimePoint& b) {
    return a.year == b.year && a.month == b.month && a.day == b.day;
  }
  friend bool operator<(const TimePoint& a, const TimePoint& b) {
    if (a.year != b.year) return a.year < b.year;
    if (a.month != b.month) return a.month < b.month;
    return a.day < b.day;
  }

  std::string str() const {
    char buf[16];
    if (has_day)
      std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    else
      std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }
};

inline TimePoint parse_time(const std::string& text) {
  TimePoint tp;
  int n = 0;
  if (std::sscanf(text.c_str(), "%d-%d-%d%n", &tp.year, &tp.month, &tp.day, &n) == 3 &&
      n == static_cast<int>(text.size())) {
    tp.has_day = true;
  } else if (std::sscanf(text.c_str(), "%d-%d%n", &tp.year, &tp.month, &n) == 2 &&
             n == static_cast<int>(text.size())) {
    tp.has_day = false;
    tp.day = 1;
  } else {
    throw data_error("unparseable date '" + text + "' (expected YYYY-MM or YYYY-MM-DD)");
  }
  if (tp.month < 1 || tp.month > 12 || tp.day < 1 || tp.day > 31)
    throw data_error("date out of range '" + text + "'");
  return tp;
}

/// T observations of p variables with a strictly increasing time index.
struct SeriesMatrix {
  std::vector<TimePoint> times;
  Eigen::MatrixXd values;  // T x p
  std::vector<std::string> variable_names;
  std::string time_name = "date";

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  Eigen::VectorXd column(Eigen::Index j) const { return values.col(j); }
  std::vector<double> column_vector(Eigen::Index j) const {
    return std::vector<double>(values.col(j).data(), values.col(j).data() + values.rows());
  }
};

/// Cluster ids together with their regime relabeling, ordered ascending by
/// the cluster mean of the first variable.
struct RegimeAssignment {
  std::vector<int> cluster_of;  // original cluster id per observation
  std::vector<int> regime_of;   // ordered regime index per observation, 0..k-1
  int k = 0;
  Eigen::MatrixXd centers;                 // k x p, row r = center of regime r
  std::vector<std::string> regime_names;   // length k, index = regime

  const std::string& name_of(int obs) const { return regime_names[regime_of[obs]]; }
};

/// Ascending cut points; regime intervals are closed below, open above.
struct ThresholdSet {
  std::vector<double> cuts;

  bool empty() const { return cuts.empty(); }
  std::size_t size() const { return cuts.size(); }

  // Interval index of x under [min, max) semantics.
  int classify(double x) const {
    return static_cast<int>(std::upper_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
  }
};

inline std::vector<std::string> default_regime_names(int k) {
  static const char* canonical[4] = {"low", "moderate", "high", "hyper"};
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    if (k <= 4)
      names.emplace_back(canonical[r]);
    else
      names.emplace_back("regime_" + std::to_string(r));
  }
  return names;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(trim(cur));
  return fields;
}

inline double parse_number(const std::string& text, std::size_t row, const std::string& col) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw data_error("unparseable numeric cell '" + text + "' in column '" + col +
                     "' at row " + std::to_string(row));
  }
  if (pos != text.size())
    throw data_error("unparseable numeric cell '" + text + "' in column '" + col +
                     "' at row " + std::to_string(row));
  return v;
}

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace detail

/// Load named numeric columns from a CSV file with a header row.
///
/// Rows are sorted by the date column; duplicate dates are rejected. Missing
/// cells are an error unless `impute_linear` is set, in which case interior
/// gaps are filled by linear interpolation (boundary gaps still error).
/// An empty `columns` list selects every non-date column.
inline SeriesMatrix load_series(const std::string& path,
                                std::vector<std::string> columns,
                                const std::string& date_column,
                                bool impute_linear = false) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file '" + path + "'");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // BOM

  const std::vector<std::string> header = detail::split_csv_line(line);
  auto col_index = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw data_error("missing column '" + name + "' in '" + path + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  const std::size_t date_idx = col_index(date_column);
  if (columns.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (j != date_idx && !header[j].empty()) columns.push_back(header[j]);
  }
  if (columns.empty()) throw data_error("no value columns in '" + path + "'");
  std::vector<std::size_t> value_idx;
  for (const auto& c : columns) value_idx.push_back(col_index(c));

  struct Row {
    TimePoint t;
    std::vector<std::optional<double>> v;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() < header.size())
      throw data_error("row " + std::to_string(lineno) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    Row r;
    r.t = parse_time(fields[date_idx]);
    for (std::size_t j = 0; j < value_idx.size(); ++j) {
      const std::string& cell = fields[value_idx[j]];
      if (cell.empty()) {
        if (!impute_linear)
          throw data_error("missing value in column '" + columns[j] + "' at row " +
                           std::to_string(lineno) + " (pass --impute linear to interpolate)");
        r.v.emplace_back(std::nullopt);
      } else {
        r.v.emplace_back(detail::parse_number(cell, lineno, columns[j]));
      }
    }
    rows.push_back(std::move(r));
  }
  if (rows.size() < 2) throw data_error("need at least 2 observations, got " +
                                        std::to_string(rows.size()));

  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.t < b.t; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].t == rows[i - 1].t)
      throw data_error("duplicate time index '" + rows[i].t.str() + "'");

  SeriesMatrix X;
  X.time_name = date_column;
  X.variable_names = columns;
  X.times.reserve(rows.size());
  X.values.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) X.times.push_back(rows[i].t);

  for (std::size_t j = 0; j < columns.size(); ++j) {
    // Interpolate interior gaps column by column.
    std::ptrdiff_t last_known = -1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].v[j].has_value()) {
        if (last_known >= 0 && static_cast<std::size_t>(last_known) + 1 < i) {
          const double lo = *rows[static_cast<std::size_t>(last_known)].v[j];
          const double hi = *rows[i].v[j];
          for (std::size_t m = static_cast<std::size_t>(last_known) + 1; m < i; ++m) {
            const double f = static_cast<double>(m - static_cast<std::size_t>(last_known)) /
                             static_cast<double>(i - static_cast<std::size_t>(last_known));
            rows[m].v[j] = lo + f * (hi - lo);
          }
        }
        last_known = static_cast<std::ptrdiff_t>(i);
      }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].v[j].has_value())
        throw data_error("cannot interpolate boundary gap in column '" + columns[j] + "'");
      X.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *rows[i].v[j];
    }
  }
  return X;
}

inline void write_series_csv(std::ostream& os, const SeriesMatrix& X) {
  os << X.time_name;
  for (const auto& n : X.variable_names) os << ',' << n;
  os << '\n';
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    os << X.times[static_cast<std::size_t>(i)].str();
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      os << ',' << detail::fmt_double(X.values(i, j));
    os << '\n';
  }
}

inline void write_series_csv(const std::string& path, const SeriesMatrix& X) {
  std::ofstream os(path);
  if (!os) throw data_error("cannot write '" + path + "'");
  write_series_csv(os, X);
}

/// Rescale every column to mean 0 and unit sample standard deviation.
inline SeriesMatrix standardize(const SeriesMatrix& X) {
  if (X.rows() < 2) throw data_error("standardize needs at least 2 observations");
  SeriesMatrix out = X;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double mean = X.values.col(j).mean();
    const double ss = (X.values.col(j).array() - mean).square().sum();
    const double sd = std::sqrt(ss / static_cast<double>(X.rows() - 1));
    if (!(sd > 0))
      throw data_error("zero-variance column '" + X.variable_names[static_cast<std::size_t>(j)] +
                       "' cannot be standardized");
    out.values.col(j) = (X.values.col(j).array() - mean) / sd;
  }
  return out;
}

}  // namespace regimes
