#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "corrard/data.hpp"

namespace corrard {

/// Fixed 17-significant-digit formatting used by every CSV writer.
/// Non-finite values print as nan, inf, -inf.
std::string format_real(double value);

/// Numeric CSV with a header row.
struct CsvTable {
  std::vector<std::string> header;
  DenseMatrix values;  // rows x header.size()

  /// Column position of `name`, or -1.
  Eigen::Index column(const std::string& name) const;
};

/// Parses comma-separated numeric data after a header row. Blank lines are
/// skipped. Throws InputError with line/column on malformed cells or ragged
/// rows.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

/// Splits a table into a Dataset using `target_column` as t and every other
/// column as a covariate. Throws InputError naming the missing column.
Dataset dataset_from_table(const CsvTable& table, const std::string& target_column);

Dataset read_dataset_csv(const std::string& path,
                         const std::string& target_column = "target");

/// Writes the header and rows with format_real.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const DenseMatrix& values);

void write_dataset_csv(std::ostream& out, const Dataset& data,
                       const std::string& target_column = "target");

}  // namespace corrard
