#include "equichord/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "equichord/errors.hpp"

namespace equichord {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += '\n';
  for (const auto& row : rows) {
    require(row.size() == header.size(), "csv row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_number(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string profile_csv(const ChordProfile& p, const std::string& parameter) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < p.lengths.size(); ++i) rows.push_back({p.parameters[i], p.lengths[i]});
  return csv_table({parameter, "length"}, rows);
}

std::string planar_body_csv(const PlanarBody& b) {
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Vec3 w = b.frame.to_world(b.radial_point(j));
    rows.push_back({b.theta[j], b.radial[j], b.support[j], w.x(), w.y(), w.z()});
  }
  return csv_table({"theta", "radial", "support", "x", "y", "z"}, rows);
}

std::string shadow_csv(const ShadowCurve& c) {
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < c.points.size(); ++j)
    rows.push_back({c.phi[j], c.points[j].x(), c.points[j].y(), c.points[j].z()});
  return csv_table({"phi", "x", "y", "z"}, rows);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::InvalidArgument, "cannot open '" + path + "' for writing");
  f << content;
  if (!f) fail(ErrorKind::InvalidArgument, "failed writing '" + path + "'");
}

}  // namespace equichord
