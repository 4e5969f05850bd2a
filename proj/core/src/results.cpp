#include "nlgrad/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "nlgrad/error.hpp"

namespace nlgrad {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ResultTable::ResultTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw InvalidArgument("result table needs at least one column");
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw InvalidArgument("row width does not match the column count");
  rows_.push_back(std::move(row));
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw InvalidArgument("no column named '" + name + "'");
  const auto c = static_cast<std::size_t>(it - columns_.begin());
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[c]);
  return out;
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t c = 0; c < r.size(); ++c) out += (c ? "," : "") + format_number(r[c]);
    out += '\n';
  }
  return out;
}

void ResultTable::write_csv(const std::filesystem::path& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << to_csv();
  if (!f) throw Error("failed writing " + path.string());
}

double fit_slope(std::span<const double> deltas, std::span<const double> errors, double floor) {
  if (deltas.size() != errors.size()) throw InvalidArgument("fit_slope needs equally many deltas and errors");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw InvalidArgument("fit_slope needs positive deltas");
    if (!(errors[i] >= floor)) continue;
    x.push_back(std::log(deltas[i]));
    y.push_back(std::log(errors[i]));
  }
  if (x.size() < 3) throw InvalidArgument("fit_slope needs at least three errors above the floor");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit_slope needs distinct deltas");
  return sxy / sxx;
}

}  // namespace nlgrad
