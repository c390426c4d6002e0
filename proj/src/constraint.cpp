#include "layered_hill/constraint.hpp"

#include <cmath>
#include <string>

namespace layered_hill {

std::string_view to_string(ConstraintKind kind) noexcept {
  switch (kind) {
    case ConstraintKind::AlwaysOne: return "always_one";
    case ConstraintKind::PairDistance: return "pair_distance";
    case ConstraintKind::Diameter: return "diameter";
    case ConstraintKind::GeometricConnectivity: return "connectivity";
  }
  return "unknown";
}

ConstraintKind constraint_kind_from_string(std::string_view name) {
  if (name == "always_one") return ConstraintKind::AlwaysOne;
  if (name == "pair_distance") return ConstraintKind::PairDistance;
  if (name == "diameter") return ConstraintKind::Diameter;
  if (name == "connectivity") return ConstraintKind::GeometricConnectivity;
  throw Error(ErrorCode::InvalidConstraint, "unknown constraint kind '" + std::string(name) + "'");
}

Constraint::Constraint(ConstraintKind kind, int arity, double radius)
    : kind_(kind), arity_(arity), radius_(radius), bound_(0.0) {
  if (arity < 1 || arity > kMaxArity)
    throw Error(ErrorCode::InvalidConstraint, "arity must lie in [1, " + std::to_string(kMaxArity) + "]");
  if (kind == ConstraintKind::AlwaysOne) {
    if (arity != 1) throw Error(ErrorCode::InvalidConstraint, "always_one has arity 1");
    radius_ = 0.0;
    return;
  }
  if (kind == ConstraintKind::PairDistance && arity != 2)
    throw Error(ErrorCode::InvalidConstraint, "pair_distance has arity 2");
  if (arity < 2) throw Error(ErrorCode::InvalidConstraint, "geometric constraints need arity >= 2");
  // Radius 0 is accepted: it selects coincident points only.
  if (!std::isfinite(radius) || radius < 0.0)
    throw Error(ErrorCode::InvalidConstraint, "radius must be finite and non-negative");

  // A connected geometric graph on k vertices spans at most (k - 1) edges.
  bound_ = kind == ConstraintKind::GeometricConnectivity ? (arity - 1) * radius : radius;
}

}  // namespace layered_hill
