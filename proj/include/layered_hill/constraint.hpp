#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>

#include "layered_hill/error.hpp"
#include "layered_hill/point_cloud.hpp"

namespace layered_hill {

enum class ConstraintKind {
  AlwaysOne,              ///< h_1 == 1
  PairDistance,           ///< |x1 - x2| <= t
  Diameter,               ///< every pairwise distance <= t
  GeometricConnectivity,  ///< the radius-t geometric graph on the tuple is connected
};

std::string_view to_string(ConstraintKind kind) noexcept;
ConstraintKind constraint_kind_from_string(std::string_view name);

/// A 0/1 indicator on k-point tuples: permutation invariant, translation
/// invariant, and zero whenever the tuple diameter exceeds bound().
class Constraint {
 public:
  static constexpr int kMaxArity = 16;

  static Constraint always_one() { return Constraint(ConstraintKind::AlwaysOne, 1, 0.0); }
  static Constraint pair_distance(double radius) { return Constraint(ConstraintKind::PairDistance, 2, radius); }
  static Constraint diameter(int arity, double radius) { return Constraint(ConstraintKind::Diameter, arity, radius); }
  static Constraint connectivity(int arity, double radius) {
    return Constraint(ConstraintKind::GeometricConnectivity, arity, radius);
  }

  /// Validating constructor used by the factories and config parsing.
  Constraint(ConstraintKind kind, int arity, double radius);

  ConstraintKind kind() const noexcept { return kind_; }
  int arity() const noexcept { return arity_; }
  double radius() const noexcept { return radius_; }

  /// Diameter cap L: evaluate() is 0 for every tuple of larger diameter.
  /// Tight for the built-in kinds.
  double bound() const noexcept { return bound_; }

  /// Core predicate. `dist2(i, j)` returns the squared distance between
  /// tuple members i and j (0 <= i < j < arity).
  template <typename Dist2>
  bool holds(Dist2&& dist2) const {
    const double t2 = radius_ * radius_;
    switch (kind_) {
      case ConstraintKind::AlwaysOne:
        return true;
      case ConstraintKind::PairDistance:
        return dist2(0, 1) <= t2;
      case ConstraintKind::Diameter:
        for (int i = 0; i < arity_; ++i)
          for (int j = i + 1; j < arity_; ++j)
            if (dist2(i, j) > t2) return false;
        return true;
      case ConstraintKind::GeometricConnectivity: {
        std::array<int, kMaxArity> parent{};
        std::iota(parent.begin(), parent.begin() + arity_, 0);
        auto find = [&](int v) {
          while (parent[static_cast<std::size_t>(v)] != v) {
            auto& p = parent[static_cast<std::size_t>(v)];
            p = parent[static_cast<std::size_t>(p)];
            v = p;
          }
          return v;
        };
        int components = arity_;
        for (int i = 0; i < arity_ && components > 1; ++i)
          for (int j = i + 1; j < arity_ && components > 1; ++j) {
            const int a = find(i);
            const int b = find(j);
            if (a != b && dist2(i, j) <= t2) {
              parent[static_cast<std::size_t>(a)] = b;
              --components;
            }
          }
        return components == 1;
      }
    }
    return false;
  }

  /// Evaluates on a tuple given as columns of a d x k matrix.
  template <typename Derived>
  bool evaluate(const Eigen::MatrixBase<Derived>& tuple) const {
    if (tuple.cols() != arity_) throw Error(ErrorCode::ArityMismatch, "tuple size differs from constraint arity");
    return holds([&](int i, int j) { return static_cast<double>((tuple.col(i) - tuple.col(j)).squaredNorm()); });
  }

  /// Evaluates on the cloud points named by `members`.
  template <typename Scalar>
  bool evaluate(const PointCloud<Scalar>& cloud, std::span<const Eigen::Index> members) const {
    if (static_cast<int>(members.size()) != arity_)
      throw Error(ErrorCode::ArityMismatch, "tuple size differs from constraint arity");
    return holds([&](int i, int j) {
      return static_cast<double>(
          (cloud.point(members[static_cast<std::size_t>(i)]) - cloud.point(members[static_cast<std::size_t>(j)]))
              .squaredNorm());
    });
  }

 private:
  ConstraintKind kind_;
  int arity_;
  double radius_;
  double bound_;
};

/// Tight diameter bound for the constraint; see Constraint::bound().
inline double bounding_radius(const Constraint& c) noexcept { return c.bound(); }

}  // namespace layered_hill
