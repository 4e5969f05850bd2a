#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nlgrad {

/// Rectangular table of numeric experiment results plus free-form
/// metadata. The CSV body holds only the header row and the data; metadata
/// belongs in the accompanying summary.
class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  std::size_t row_count() const { return rows_.size(); }

  /// Throws InvalidArgument unless the row has one value per column.
  void add_row(std::vector<double> row);

  /// Values of the named column, in row order.
  std::vector<double> column(const std::string& name) const;

  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const { return metadata_; }

  /// Comma separated, header row, %.17g numbers, LF line endings.
  std::string to_csv() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::map<std::string, std::string> metadata_;
};

/// Least-squares slope of log(error) against log(delta). Pairs whose error
/// is below `floor` are dropped as round-off dominated; at least three
/// positive pairs must remain.
double fit_slope(std::span<const double> deltas, std::span<const double> errors, double floor = 1e-13);

/// %.17g formatting shared by every text output.
std::string format_number(double v);

}  // namespace nlgrad
