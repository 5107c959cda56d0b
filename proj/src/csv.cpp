#include "corrard/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corrard/errors.hpp"

namespace corrard {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, long line, long column) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (cell.empty() || ec != std::errc() || ptr != last) {
    throw InputError("cannot parse '" + cell + "' as a number", line, column);
  }
  if (!std::isfinite(value)) {
    throw InputError("non-finite value '" + cell + "'", line, column);
  }
  return value;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

Eigen::Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw InputError("CSV input is empty");
  table.header = split_fields(trim(line));
  const auto cols = table.header.size();
  for (std::size_t c = 0; c < cols; ++c) {
    if (table.header[c].empty()) {
      throw InputError("empty column name in header", line_no, static_cast<long>(c + 1));
    }
  }

  std::vector<double> cells;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(trim(line));
    if (fields.size() != cols) {
      throw InputError("expected " + std::to_string(cols) + " fields, found " +
                           std::to_string(fields.size()),
                       line_no);
    }
    for (std::size_t c = 0; c < cols; ++c) {
      cells.push_back(parse_cell(fields[c], line_no, static_cast<long>(c + 1)));
    }
    ++rows;
  }
  table.values = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(
      cells.data(), rows, static_cast<Eigen::Index>(cols));
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return parse_csv(in);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

Dataset dataset_from_table(const CsvTable& table, const std::string& target_column) {
  const Eigen::Index target = table.column(target_column);
  if (target < 0) {
    throw InputError("missing target column '" + target_column + "'", 1);
  }
  if (table.values.rows() == 0) throw InputError("CSV has no data rows");
  if (table.header.size() < 2) throw InputError("CSV has no covariate columns", 1);
  Dataset data;
  const Eigen::Index n_cols = static_cast<Eigen::Index>(table.header.size());
  data.X.resize(table.values.rows(), n_cols - 1);
  Eigen::Index j = 0;
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    if (c == target) continue;
    data.X.col(j++) = table.values.col(c);
    data.feature_names.push_back(table.header[static_cast<std::size_t>(c)]);
  }
  data.t = table.values.col(target);
  return data;
}

Dataset read_dataset_csv(const std::string& path, const std::string& target_column) {
  try {
    return dataset_from_table(read_csv(path), target_column);
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw InputError(path + ": " + msg);
  }
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const DenseMatrix& values) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      out << (c ? "," : "") << format_real(values(r, c));
    }
    out << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::string& target_column) {
  std::vector<std::string> header = data.feature_names;
  if (header.empty()) {
    for (Eigen::Index j = 0; j < data.n_features(); ++j) {
      header.push_back("x" + std::to_string(j));
    }
  }
  header.push_back(target_column);
  DenseMatrix values(data.n_samples(), data.n_features() + 1);
  values << data.X, data.t;
  write_csv(out, header, values);
}

}  // namespace corrard
