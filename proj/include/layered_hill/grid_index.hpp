#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "layered_hill/error.hpp"
#include "layered_hill/point_cloud.hpp"

namespace layered_hill {

inline constexpr Eigen::Index kMaxGridDim = 10;

/// Integer lattice coordinates of a grid cell; unused trailing entries are 0.
using CellKey = std::array<std::int64_t, kMaxGridDim>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t c : key) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Uniform-grid index over a PointCloud for fixed-radius neighbor queries.
///
/// Points are bucketed by floor(x / cellSize) per coordinate. Member lists
/// are stored contiguously per cell in ascending point index. The index
/// refers to the cloud it was built from; the cloud must outlive it.
template <typename Scalar>
class GridIndex {
 public:
  using Index = Eigen::Index;

  GridIndex(const PointCloud<Scalar>& cloud, Scalar cellSize) : cloud_(&cloud), cell_size_(cellSize) {
    if (!(cellSize > Scalar(0))) throw Error(ErrorCode::NonPositiveCellSize, "cell size must be positive");
    if (cloud.dim() > kMaxGridDim) throw Error(ErrorCode::UnsupportedDimension, "grid index supports d <= 10");

    const Index n = cloud.size();
    std::vector<std::pair<CellKey, Index>> keyed;
    keyed.reserve(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) keyed.emplace_back(cell_of(cloud.point(i)), i);
    std::sort(keyed.begin(), keyed.end());

    members_.reserve(keyed.size());
    for (std::size_t j = 0; j < keyed.size();) {
      std::size_t end = j;
      while (end < keyed.size() && keyed[end].first == keyed[j].first) ++end;
      const auto begin = static_cast<std::uint32_t>(members_.size());
      for (std::size_t t = j; t < end; ++t) members_.push_back(keyed[t].second);
      cells_.emplace(keyed[j].first, std::make_pair(begin, static_cast<std::uint32_t>(members_.size())));
      j = end;
    }
  }

  const PointCloud<Scalar>& cloud() const noexcept { return *cloud_; }
  Scalar cell_size() const noexcept { return cell_size_; }
  std::size_t occupied_cells() const noexcept { return cells_.size(); }

  template <typename Derived>
  CellKey cell_of(const Eigen::MatrixBase<Derived>& x) const {
    // Clamping keeps far-out coordinates representable; it is monotone, so
    // adjacent cells stay adjacent and exact distance checks stay exact.
    constexpr double kLimit = 4.0e18;
    CellKey key{};
    for (Index c = 0; c < x.size(); ++c) {
      const double q = std::floor(static_cast<double>(x(c)) / static_cast<double>(cell_size_));
      key[static_cast<std::size_t>(c)] = static_cast<std::int64_t>(std::clamp(q, -kLimit, kLimit));
    }
    return key;
  }

  /// Point indices stored in one cell (empty if the cell is unoccupied).
  std::vector<Index> members(const CellKey& key) const {
    auto it = cells_.find(key);
    if (it == cells_.end()) return {};
    return {members_.begin() + it->second.first, members_.begin() + it->second.second};
  }

  /// Calls visit(j) for every point j with |x_j - query| <= r, j != exclude.
  /// Radii larger than the cell size widen the scanned block of cells.
  template <typename Derived, typename Visitor>
  void for_each_neighbor(const Eigen::MatrixBase<Derived>& query, Scalar r, Visitor&& visit,
                         std::optional<Index> exclude = std::nullopt) const {
    const Index d = cloud_->dim();
    if (query.size() != d) throw Error(ErrorCode::DimensionMismatch, "query dimension differs from cloud");
    if (cells_.empty()) return;

    const auto span = static_cast<std::int64_t>(
        std::max<double>(1.0, std::ceil(static_cast<double>(r) / static_cast<double>(cell_size_))));
    const CellKey centre = cell_of(query);
    const Scalar r2 = r * r;

    std::array<std::int64_t, kMaxGridDim> offset{};
    for (Index c = 0; c < d; ++c) offset[static_cast<std::size_t>(c)] = -span;
    CellKey probe{};
    while (true) {
      for (Index c = 0; c < d; ++c) {
        const auto u = static_cast<std::size_t>(c);
        probe[u] = centre[u] + offset[u];
      }
      if (auto it = cells_.find(probe); it != cells_.end()) {
        for (std::uint32_t t = it->second.first; t < it->second.second; ++t) {
          const Index j = members_[t];
          if (exclude && *exclude == j) continue;
          if ((cloud_->point(j) - query).squaredNorm() <= r2) visit(j);
        }
      }
      Index c = 0;
      for (; c < d; ++c) {
        auto& o = offset[static_cast<std::size_t>(c)];
        if (++o <= span) break;
        o = -span;
      }
      if (c == d) break;
    }
  }

  /// Indices within distance r of the query (inclusive), ascending.
  template <typename Derived>
  std::vector<Index> neighbors_within(const Eigen::MatrixBase<Derived>& query, Scalar r,
                                      std::optional<Index> exclude = std::nullopt) const {
    std::vector<Index> out;
    for_each_neighbor(query, r, [&](Index j) { out.push_back(j); }, exclude);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const PointCloud<Scalar>* cloud_;
  Scalar cell_size_;
  std::unordered_map<CellKey, std::pair<std::uint32_t, std::uint32_t>, CellKeyHash> cells_;
  std::vector<Index> members_;
};

}  // namespace layered_hill
