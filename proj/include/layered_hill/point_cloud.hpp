#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "layered_hill/error.hpp"

namespace layered_hill {

/// An immutable sample of points in R^d.
///
/// Points are stored column-wise (one column per point) so that a single
/// point is a contiguous `d`-vector. Euclidean norms are computed once at
/// construction; the enumeration reads them far more often than the
/// coordinates.
template <typename Scalar_>
class PointCloud {
 public:
  using Scalar = Scalar_;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  PointCloud() : PointCloud(1) {}

  /// Empty cloud of the given dimension.
  explicit PointCloud(Index dim) : points_(dim, 0), norms_(0) {
    if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
  }

  /// Takes a d x n matrix, one point per column.
  explicit PointCloud(Matrix points) : points_(std::move(points)) {
    if (points_.rows() < 1) throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
    if (!points_.allFinite()) throw Error(ErrorCode::NonFiniteCoordinate, "all coordinates must be finite");
    norms_ = points_.colwise().norm().transpose();
  }

  Index dim() const noexcept { return points_.rows(); }
  Index size() const noexcept { return points_.cols(); }
  bool empty() const noexcept { return points_.cols() == 0; }

  const Matrix& points() const noexcept { return points_; }
  const Vector& norms() const noexcept { return norms_; }

  auto point(Index i) const { return points_.col(i); }
  Scalar norm(Index i) const { return norms_(i); }

  /// Subcloud made of the listed columns, in the listed order.
  PointCloud select(const std::vector<Index>& indices) const {
    Matrix sub(dim(), static_cast<Index>(indices.size()));
    for (std::size_t j = 0; j < indices.size(); ++j) sub.col(static_cast<Index>(j)) = points_.col(indices[j]);
    return PointCloud(std::move(sub));
  }

 private:
  Matrix points_;
  Vector norms_;
};

using PointCloudd = PointCloud<double>;

/// Point indices ordered by non-increasing norm, ties by ascending index.
///
/// This is the insertion order for tuple enumeration and the removal order
/// for censoring; both must agree.
template <typename Scalar>
std::vector<Eigen::Index> descending_norm_order(const PointCloud<Scalar>& cloud) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cloud.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& norms = cloud.norms();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return norms(a) > norms(b); });
  return order;
}

}  // namespace layered_hill
