// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace tightembed {

/// Finite metric space as a validated symmetric distance matrix.
class FiniteMetricSpace {
 public:
  /// Validates the metric axioms (symmetry, zero diagonal, positivity off the
  /// diagonal, triangle inequality with 1e-9 slack) and throws
  /// std::invalid_argument naming the violated axiom and indices.
  static FiniteMetricSpace validate(std::vector<std::vector<double>> d);

  int size() const { return n_; }
  double distance(int i, int j) const {
    return d_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
              static_cast<std::size_t>(j)];
  }
  double min_positive_distance() const;
  double diameter() const;
  std::vector<std::vector<double>> matrix() const;

 private:
  FiniteMetricSpace() = default;
  int n_ = 0;
  std::vector<double> d_;  // row-major n x n
};

/// Finite list of coordinate vectors in l_p (p in [1, inf], inf = max norm)
/// with an optional distinguished basepoint of norm zero.
class LpPointSet {
 public:
  LpPointSet(double p, std::vector<std::vector<double>> points,
             std::optional<int> basepoint = std::nullopt);

  double p() const { return p_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<double>& point(int i) const {
    return points_[static_cast<std::size_t>(i)];
  }
  const std::vector<std::vector<double>>& points() const { return points_; }
  std::optional<int> basepoint() const { return basepoint_; }

  double norm(int i) const;
  double distance(int i, int j) const;
  FiniteMetricSpace metric() const;

 private:
  double p_ = 2.0;
  int dim_ = 0;
  std::vector<std::vector<double>> points_;
  std::optional<int> basepoint_;
};

double lp_norm(const std::vector<double>& x, double p);
double lp_distance(const std::vector<double>& x, const std::vector<double>& y,
                   double p);

/// The unique k with 2^k <= ||x|| < 2^(k+1); nullopt for the zero vector.
std::optional<int> dyadic_annulus_index(double norm);

/// Indices of points with ||x||_p <= 2^(k+1).
std::vector<int> ball_members(const LpPointSet& set, int k);

/// Greedy delta-net scanned in index order from index 0: a point joins the
/// net when it is more than delta away from every earlier net point. Covering
/// radius <= delta, pairwise separation > delta, deterministic.
std::vector<int> epsilon_net(const FiniteMetricSpace& space, double delta);

/// Nearest net point per point, ties broken toward the lowest net index.
std::vector<int> nearest_net_map(const FiniteMetricSpace& space,
                                 const std::vector<int>& net);

/// Samples of the compact diagonal-operator image { sum a_n t_n e_n : t in
/// the unit ball of l_p^N }: the origin, the extreme points +/- a_n e_n, and
/// `count` seeded random ball points. Weights must be positive,
/// non-increasing, with sum <= 1.
LpPointSet kalton_compact_sample(double p, int truncation,
                                 const std::vector<double>& weights, int count,
                                 std::uint64_t seed);

/// Same with the default weights a_n = 4^-n.
LpPointSet kalton_compact_sample(double p, int truncation, int count,
                                 std::uint64_t seed);
std::vector<double> kalton_default_weights(int truncation);

/// Splitmix-based uniform doubles in [0, 1); identical across platforms for
/// a given seed, which the fixture determinism contract relies on.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double next_unit();                      // [0, 1)
  double next_symmetric();                 // [-1, 1)
  int next_below(int bound);               // [0, bound)

 private:
  std::uint64_t state_;
};

}  // namespace tightembed
