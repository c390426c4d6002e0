#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <vector>

#include "layered_hill/constraint.hpp"
#include "layered_hill/error.hpp"
#include "layered_hill/grid_index.hpp"
#include "layered_hill/point_cloud.hpp"

namespace layered_hill {

/// Descending order statistics U_k(1) >= U_k(2) >= ... of the minimum norms
/// of constrained k-subsets. Only qualifying subsets are materialised.
struct OrderStatStream {
  int k = 1;
  std::vector<double> values;
  std::uint64_t requested = 0;
  bool exhausted = false;
  std::uint64_t total_enumerated = 0;
};

namespace detail {

// Visits every size-`size` combination of `pool` (as positions into pool),
// in lexicographic order. Stops early when visit returns false.
inline bool for_each_combination(std::size_t pool, std::size_t size,
                                 const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  if (size > pool) return true;
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    if (!visit(pick)) return false;
    std::size_t i = size;
    while (i > 0 && pick[i - 1] == pool - size + (i - 1)) --i;
    if (i == 0) return true;
    ++pick[i - 1];
    for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

}  // namespace detail

/// The `count` largest constrained-tuple minima, by lazy enumeration.
///
/// Points are inserted in non-increasing norm order (ties by ascending index).
/// Inserting p emits |p| once per (k-1)-subset S of earlier points such that
/// S + {p} satisfies the constraint; candidates for S come from the grid
/// neighbourhood of p of radius bound(). Every qualifying tuple is emitted
/// exactly once, at the insertion of its last-inserted (minimum-norm) member,
/// so the stream is non-increasing and can stop after `count` emissions.
template <typename Scalar>
OrderStatStream top_tuple_values(const PointCloud<Scalar>& cloud, const Constraint& c, std::uint64_t count) {
  using Index = Eigen::Index;
  const int k = c.arity();
  if (count < 1) throw Error(ErrorCode::ParameterOutOfRange, "count must be positive");
  if (k > cloud.size()) throw Error(ErrorCode::ArityExceedsCloud, "constraint arity exceeds cloud size");

  OrderStatStream stream;
  stream.k = k;
  stream.requested = count;
  stream.values.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));

  const std::vector<Index> order = descending_norm_order(cloud);

  auto emit = [&](double value) {
    assert(stream.values.empty() || value <= stream.values.back());
    stream.values.push_back(value);
    return stream.values.size() < count;
  };

  if (k == 1) {
    for (Index p : order)
      if (!emit(static_cast<double>(cloud.norm(p)))) break;
    stream.total_enumerated = stream.values.size();
    stream.exhausted = stream.values.size() < count;
    return stream;
  }

  std::vector<Index> rank(order.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) rank[static_cast<std::size_t>(order[pos])] = static_cast<Index>(pos);

  const double bound = c.bound();
  const GridIndex<Scalar> grid(cloud, static_cast<Scalar>(bound > 0.0 ? bound : 1.0));

  std::vector<Index> earlier;
  std::vector<Index> tuple(static_cast<std::size_t>(k));
  bool more = true;
  for (std::size_t pos = 0; pos < order.size() && more; ++pos) {
    const Index p = order[pos];
    const auto value = static_cast<double>(cloud.norm(p));

    earlier.clear();
    grid.for_each_neighbor(
        cloud.point(p), static_cast<Scalar>(bound),
        [&](Index j) {
          if (rank[static_cast<std::size_t>(j)] < static_cast<Index>(pos)) earlier.push_back(j);
        },
        p);
    if (earlier.size() + 1 < static_cast<std::size_t>(k)) continue;
    std::sort(earlier.begin(), earlier.end(),
              [&](Index a, Index b) { return rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]; });

    tuple.back() = p;
    if (k == 2) {
      for (Index q : earlier) {
        tuple[0] = q;
        if (c.evaluate(cloud, std::span<const Index>(tuple)) && !emit(value)) {
          more = false;
          break;
        }
      }
      continue;
    }
    more = detail::for_each_combination(
        earlier.size(), static_cast<std::size_t>(k - 1), [&](const std::vector<std::size_t>& pick) {
          for (std::size_t i = 0; i < pick.size(); ++i) tuple[i] = earlier[pick[i]];
          if (!c.evaluate(cloud, std::span<const Index>(tuple))) return true;
          return emit(value);
        });
  }
  stream.total_enumerated = stream.values.size();
  stream.exhausted = stream.values.size() < count;
  return stream;
}

inline constexpr std::uint64_t kBruteForceSubsetLimit = 10'000'000;

/// Saturating binomial coefficient.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (result > UINT64_MAX / num) return UINT64_MAX;
    result = result * num / i;
  }
  return result;
}

/// Every constrained k-subset's minimum norm, sorted non-increasing.
/// Exhaustive; intended as an oracle for small clouds.
template <typename Scalar>
std::vector<double> brute_force_tuple_values(const PointCloud<Scalar>& cloud, const Constraint& c) {
  using Index = Eigen::Index;
  const auto n = static_cast<std::size_t>(cloud.size());
  const auto k = static_cast<std::size_t>(c.arity());
  if (k > n) throw Error(ErrorCode::ArityExceedsCloud, "constraint arity exceeds cloud size");
  if (binomial(n, k) > kBruteForceSubsetLimit)
    throw Error(ErrorCode::TooManySubsets, "more than 1e7 subsets to enumerate");

  std::vector<double> values;
  std::vector<Index> tuple(k);
  detail::for_each_combination(n, k, [&](const std::vector<std::size_t>& pick) {
    double smallest = static_cast<double>(cloud.norm(static_cast<Index>(pick[0])));
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i] = static_cast<Index>(pick[i]);
      smallest = std::min(smallest, static_cast<double>(cloud.norm(tuple[i])));
    }
    if (c.evaluate(cloud, std::span<const Index>(tuple))) values.push_back(smallest);
    return true;
  });
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

/// Number of emitted values >= threshold.
inline std::uint64_t count_exceedances(const OrderStatStream& stream, double threshold) {
  if (!stream.exhausted && (stream.values.empty() || stream.values.back() >= threshold))
    throw Error(ErrorCode::IndeterminateCount, "stream was cut before dropping below the threshold");
  return static_cast<std::uint64_t>(
      std::count_if(stream.values.begin(), stream.values.end(), [&](double v) { return v >= threshold; }));
}

}  // namespace layered_hill
