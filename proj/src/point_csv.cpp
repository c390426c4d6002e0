#include "layered_hill/point_csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "layered_hill/error.hpp"

namespace layered_hill {

namespace {

bool parse_double(std::string_view field, double& out) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t')) field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

PointCloudd read_point_csv(std::istream& in, int dim) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  std::vector<double> coords;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto fields = split(line);
    double value = 0.0;
    if (first_row) {
      first_row = false;
      if (!parse_double(fields.front(), value)) continue;  // header
    }
    if (static_cast<int>(fields.size()) != dim) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(line_no) + ": expected " +
                                                    std::to_string(dim) + " fields, found " +
                                                    std::to_string(fields.size()));
    }
    for (const auto field : fields) {
      if (!parse_double(field, value))
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number '" +
                                               std::string(field) + "'");
      coords.push_back(value);
    }
  }
  const auto n = static_cast<Eigen::Index>(coords.size() / static_cast<std::size_t>(dim));
  if (n == 0) return PointCloudd(dim);
  return PointCloudd(Eigen::Map<const Eigen::MatrixXd>(coords.data(), dim, n));
}

PointCloudd read_point_csv(const std::filesystem::path& path, int dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  return read_point_csv(in, dim);
}

void write_point_csv(std::ostream& out, const PointCloudd& cloud) {
  char buf[32];
  for (Eigen::Index j = 0; j < cloud.size(); ++j) {
    for (Eigen::Index c = 0; c < cloud.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cloud.points()(c, j));
      if (c > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace layered_hill
