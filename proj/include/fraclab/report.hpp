#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

// Tabular sweep record. Metadata is written after the rows as "# key=value"
// lines so that the header stays the first line of the CSV.
struct SweepReport {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> meta;

  void add_row(std::vector<double> row);
  void set_meta(const std::string& key, const std::string& value);
  void set_meta(const std::string& key, double value);
  std::string get_meta(const std::string& key) const;
  std::vector<double> column(const std::string& name) const;
  void write_csv(std::ostream& out) const;
};

// 12 significant digits, printf %g style.
std::string format_g12(double v);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
};

// Least-squares line y = intercept + slope * x.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fraclab
