#include "fraclab/report.hpp"

#include <cstdio>
#include <ostream>

#include "fraclab/common.hpp"

namespace fraclab {

void SweepReport::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    fail(ErrorCode::InvalidArgument, "row width does not match the column count");
  rows.push_back(std::move(row));
}

void SweepReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : meta)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  meta.emplace_back(key, value);
}

void SweepReport::set_meta(const std::string& key, double value) { set_meta(key, format_g12(value)); }

std::string SweepReport::get_meta(const std::string& key) const {
  for (const auto& kv : meta)
    if (kv.first == key) return kv.second;
  return {};
}

std::vector<double> SweepReport::column(const std::string& name) const {
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (columns[c] == name) {
      std::vector<double> out;
      for (const auto& r : rows) out.push_back(r[c]);
      return out;
    }
  fail(ErrorCode::InvalidArgument, "no column named " + name);
}

void SweepReport::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_g12(r[c]);
    out << '\n';
  }
  for (const auto& [k, v] : meta) out << "# " << k << '=' << v << '\n';
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorCode::InvalidArgument, "line fit needs two or more points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  if (sxx == 0) fail(ErrorCode::InvalidArgument, "line fit needs distinct abscissae");
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace fraclab
