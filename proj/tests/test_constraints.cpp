#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "layered_hill/constraint.hpp"
#include "test_support.hpp"

using namespace layered_hill;

namespace {

Eigen::MatrixXd tuple(std::initializer_list<std::initializer_list<double>> points) {
  return layered_hill::testing::cloud_from(points).points();
}

double diameter(const Eigen::MatrixXd& t) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < t.cols(); ++i)
    for (Eigen::Index j = i + 1; j < t.cols(); ++j) best = std::max(best, (t.col(i) - t.col(j)).norm());
  return best;
}

std::vector<Constraint> all_kinds(int k, double t) {
  std::vector<Constraint> out;
  if (k == 1) out.push_back(Constraint::always_one());
  if (k == 2) out.push_back(Constraint::pair_distance(t));
  if (k >= 2) {
    out.push_back(Constraint::diameter(k, t));
    out.push_back(Constraint::connectivity(k, t));
  }
  return out;
}

}  // namespace

TEST(Constraint, AlwaysOne) {
  EXPECT_TRUE(Constraint::always_one().evaluate(tuple({{123.0, -4.0}})));
}

TEST(Constraint, PairDistance) {
  const auto c = Constraint::pair_distance(1.0);
  EXPECT_TRUE(c.evaluate(tuple({{0, 0}, {0.5, 0}})));
  EXPECT_FALSE(c.evaluate(tuple({{0, 0}, {1.5, 0}})));
  EXPECT_TRUE(c.evaluate(tuple({{0, 0}, {1.0, 0}})));
}

TEST(Constraint, ConnectivityVersusDiameter) {
  const auto path = tuple({{0, 0}, {0.9, 0}, {1.8, 0}});
  EXPECT_TRUE(Constraint::connectivity(3, 1.0).evaluate(path));
  EXPECT_FALSE(Constraint::diameter(3, 1.0).evaluate(path));
}

TEST(Constraint, DisconnectedTriple) {
  EXPECT_FALSE(Constraint::connectivity(3, 1.0).evaluate(tuple({{0, 0}, {0.9, 0}, {5, 0}})));
}

TEST(Constraint, BoundingRadius) {
  EXPECT_DOUBLE_EQ(bounding_radius(Constraint::pair_distance(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(bounding_radius(Constraint::diameter(3, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(bounding_radius(Constraint::connectivity(3, 1.0)), 2.0);
  EXPECT_DOUBLE_EQ(bounding_radius(Constraint::connectivity(4, 0.5)), 1.5);
}

TEST(Constraint, Errors) {
  EXPECT_THROW(Constraint(ConstraintKind::AlwaysOne, 2, 0.0), Error);
  EXPECT_THROW(Constraint(ConstraintKind::PairDistance, 3, 1.0), Error);
  EXPECT_THROW(Constraint(ConstraintKind::Diameter, 1, 1.0), Error);
  EXPECT_THROW(Constraint(ConstraintKind::Diameter, 3, -1.0), Error);
  try {
    Constraint::pair_distance(1.0).evaluate(tuple({{0, 0}, {1, 0}, {2, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArityMismatch);
  }
}

TEST(Constraint, KindNames) {
  for (auto kind : {ConstraintKind::AlwaysOne, ConstraintKind::PairDistance, ConstraintKind::Diameter,
                    ConstraintKind::GeometricConnectivity})
    EXPECT_EQ(constraint_kind_from_string(to_string(kind)), kind);
  EXPECT_THROW(constraint_kind_from_string("clique"), Error);
}

// Permutation, translation and support-bound properties over random tuples.
TEST(Constraint, InvarianceProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  for (int k = 1; k <= 4; ++k) {
    for (const Constraint& c : all_kinds(k, 1.0)) {
      for (int trial = 0; trial < 500; ++trial) {
        Eigen::MatrixXd t(2, k);
        for (Eigen::Index j = 0; j < k; ++j) t.col(j) << coord(rng), coord(rng);
        const bool value = c.evaluate(t);

        std::vector<Eigen::Index> perm(static_cast<std::size_t>(k));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd permuted(2, k);
        for (Eigen::Index j = 0; j < k; ++j) permuted.col(j) = t.col(perm[static_cast<std::size_t>(j)]);
        EXPECT_EQ(c.evaluate(permuted), value);

        // Power-of-two offsets keep coordinate differences exact.
        const Eigen::Vector2d offset(std::ldexp(std::round(shift(rng)), 0), std::ldexp(std::round(shift(rng)), 1));
        EXPECT_EQ(c.evaluate(t.colwise() + offset), value);

        if (value) EXPECT_LE(diameter(t), bounding_radius(c) + 1e-12);
      }
    }
  }
}

TEST(Constraint, ConnectivityOfPairMatchesPairDistance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const auto pair = Constraint::pair_distance(0.8);
  const auto conn = Constraint::connectivity(2, 0.8);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::MatrixXd t(2, 2);
    t << coord(rng), coord(rng), coord(rng), coord(rng);
    EXPECT_EQ(pair.evaluate(t), conn.evaluate(t));
  }
}
