#include "orthojoint/csv.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "orthojoint/util.hpp"

namespace orthojoint {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return c != ' ' && c != '\t' && c != '\r'; };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

int find_column(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw Error(ErrorCode::MissingColumn, "MissingColumn(" + name + ")");
  return static_cast<int>(it - header.begin());
}

Error parse_error(std::size_t row, const std::string& col, const std::string& what) {
  return Error(ErrorCode::ParseError,
               "ParseError(" + std::to_string(row) + ", " + col + "): " + what);
}

}  // namespace

Dataset read_csv(std::istream& in, const CsvColumns& cols) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "csv: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);

  const int g_col = find_column(header, cols.gender_col);
  const int a_col = find_column(header, cols.age_col);
  std::vector<int> f_cols;
  if (cols.feature_cols.empty()) {
    for (int c = 0; c < static_cast<int>(header.size()); ++c)
      if (c != g_col && c != a_col) f_cols.push_back(c);
  } else {
    for (const auto& name : cols.feature_cols) f_cols.push_back(find_column(header, name));
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> gender_raw;
  std::vector<double> ages;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw parse_error(row, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
    }
    std::vector<double> x;
    x.reserve(f_cols.size());
    for (int c : f_cols) {
      double v = 0.0;
      if (!parse_double(cells[static_cast<std::size_t>(c)], v)) {
        throw parse_error(row, header[static_cast<std::size_t>(c)], "not a number");
      }
      x.push_back(v);
    }
    double age = 0.0;
    if (!parse_double(cells[static_cast<std::size_t>(a_col)], age)) {
      throw parse_error(row, header[static_cast<std::size_t>(a_col)], "not a number");
    }
    rows.push_back(std::move(x));
    gender_raw.push_back(trim(cells[static_cast<std::size_t>(g_col)]));
    ages.push_back(age);
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "csv: no data rows");

  // Gender map.
  std::vector<std::string> distinct = gender_raw;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() > 2) {
    throw Error(ErrorCode::InvalidLabel,
                "InvalidLabel: gender column has " + std::to_string(distinct.size()) +
                    " distinct values, need at most 2");
  }
  bool numeric = true;
  std::vector<double> numeric_values;
  for (const auto& s : distinct) {
    double v = 0.0;
    if (!parse_double(s, v)) numeric = false;
    numeric_values.push_back(v);
  }
  if (numeric && distinct.size() == 2 && numeric_values[1] < numeric_values[0]) {
    std::swap(distinct[0], distinct[1]);
  }
  LabelMaps labels;
  if (distinct.size() == 2) {
    labels.gender_names = {distinct[0], distinct[1]};
  } else {
    // One value only; dataset validation reports SingleGender.
    labels.gender_names = {distinct[0], distinct[0] + "?"};
  }

  // Age map.
  std::vector<double> sorted_ages = ages;
  std::sort(sorted_ages.begin(), sorted_ages.end());
  sorted_ages.erase(std::unique(sorted_ages.begin(), sorted_ages.end()), sorted_ages.end());
  labels.class_ages = sorted_ages;

  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(f_cols.size()));
  Eigen::VectorXi g(n);
  Eigen::VectorXi k(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = rows[u][static_cast<std::size_t>(j)];
    g(i) = gender_raw[u] == labels.gender_names[0] ? -1 : 1;
    k(i) = static_cast<int>(std::lower_bound(sorted_ages.begin(), sorted_ages.end(), ages[u]) -
                            sorted_ages.begin()) + 1;
  }
  Dataset d = make_dataset(std::move(X), std::move(g), std::move(k), static_cast<int>(sorted_ages.size()));
  d.labels = labels;
  require_valid(d);
  return d;
}

Dataset load_csv(const std::string& path, const CsvColumns& cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "IoError: cannot open " + path);
  return read_csv(in, cols);
}

Eigen::MatrixXd read_feature_csv(std::istream& in, const CsvColumns& cols) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "csv: missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = split_line(line);
  for (auto& h : header) h = trim(h);
  std::vector<int> f_cols;
  if (cols.feature_cols.empty()) {
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
      const auto& h = header[static_cast<std::size_t>(c)];
      if (h != cols.gender_col && h != cols.age_col) f_cols.push_back(c);
    }
  } else {
    for (const auto& name : cols.feature_cols) f_cols.push_back(find_column(header, name));
  }
  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw parse_error(row, "*", "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
    }
    for (int c : f_cols) {
      double v = 0.0;
      if (!parse_double(cells[static_cast<std::size_t>(c)], v)) {
        throw parse_error(row, header[static_cast<std::size_t>(c)], "not a number");
      }
      values.push_back(v);
    }
  }
  if (row == 0) throw Error(ErrorCode::EmptyInput, "csv: no data rows");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(f_cols.size()));
}

Eigen::MatrixXd load_feature_csv(const std::string& path, const CsvColumns& cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "IoError: cannot open " + path);
  return read_feature_csv(in, cols);
}

void write_csv(std::ostream& out, const Dataset& d) {
  for (int j = 0; j < d.dim(); ++j) out << 'f' << (j + 1) << ',';
  out << "gender,age\n";
  for (int i = 0; i < d.size(); ++i) {
    for (int j = 0; j < d.dim(); ++j) out << format_double(d.features(i, j)) << ',';
    out << d.labels.gender_name(d.genders(i)) << ',' << format_double(d.labels.age_of(d.classes(i)))
        << '\n';
  }
}

void save_csv(const std::string& path, const Dataset& d) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "IoError: cannot write " + path);
  write_csv(out, d);
  if (!out) throw Error(ErrorCode::IoError, "IoError: write failed for " + path);
}

}  // namespace orthojoint
