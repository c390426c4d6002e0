#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "layered_hill/point_cloud.hpp"

namespace layered_hill {

/// Reads one point per row, exactly `dim` comma-separated decimals. A first
/// row whose first field is not numeric is taken as a header. LF and CRLF
/// line endings are accepted; blank lines are skipped.
PointCloudd read_point_csv(std::istream& in, int dim);
PointCloudd read_point_csv(const std::filesystem::path& path, int dim);

void write_point_csv(std::ostream& out, const PointCloudd& cloud);

}  // namespace layered_hill
