// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tightembed/curves.hpp"
#include "tightembed/spaces.hpp"

namespace tightembed {

/// Truncated-distance coordinate for the ordered pair (p, q), vanishing at
/// the basepoint:
///   g_{p,q}(x) = max{d(p,q) - d(q,x), 0} - max{d(p,q) - d(q,0), 0}.
double g_pq(const FiniteMetricSpace& space, int basepoint, int p, int q, int x);

/// The rho-weighted coordinate h_{p,q} = (rho(d(p,q)) / d(p,q)) g_{p,q}.
/// rho must be certified in P.
double h_pq(const FiniteMetricSpace& space, const ModulusCurve& rho,
            int basepoint, int p, int q, int x);

/// Omega-weighted Lipschitz seminorm of a function table over the space:
/// sup_{x != y} |v(x) - v(y)| / omega(d(x, y)). omega must be in Omega.
double n_omega(const std::vector<double>& values,
               const FiniteMetricSpace& space, const ModulusCurve& omega);

/// The full coordinate table over every ordered pair (p, q), p != q.
/// Image distances are sup-norm row differences over the coordinates.
struct StableEmbedding {
  FiniteMetricSpace base;
  int basepoint = 0;
  ModulusCurve rho;
  ModulusCurve omega;
  std::vector<std::pair<int, int>> coords;  // ordered pairs, p != q
  std::vector<std::vector<double>> table;   // [coordinate][point]

  int coord_index(int p, int q) const;
  double image_distance(int x, int y) const;
};

/// Builds the table. Both curves must already satisfy the regularized
/// hypotheses (non-decreasing, v(t)/t non-increasing); raw class members are
/// rejected with guidance to run regularize_rho / regularize_omega first.
StableEmbedding embed_stable(const FiniteMetricSpace& space, int basepoint,
                             const ModulusCurve& rho, const ModulusCurve& omega);

struct StablePairRow {
  int i = 0, j = 0;
  double d = 0.0;
  double image_d = 0.0;   // sup-coordinate distance
  double lower = 0.0;     // rho(d)
  double upper = 0.0;     // omega(d)
  double attained = 0.0;  // |h_{i,j}(i) - h_{i,j}(j)|, equals rho(d)
  bool pass = false;
};

struct StableReport {
  std::vector<StablePairRow> rows;
  bool pass = false;
  int worst_row = -1;
  double n_omega_max = 0.0;  // max over coordinates, must be <= 1 + slack
};

/// Certifies rho(d) <= image distance <= omega(d) on every pair, the exact
/// attainment of the lower bound at coordinate (x, y), and N_omega <= 1 for
/// every coordinate row.
StableReport verify_stable(const StableEmbedding& embedding);

/// Image of the embedding as a metric space, paired with the base by index.
FiniteMetricSpace stable_image_metric(const StableEmbedding& embedding);

/// The coordinate ratio R_{p,q}(x,y) = |h_{p,q}(x) - h_{p,q}(y)| / omega(d(x,y))
/// with its finite-scale dominating bounds, one per proof case.
struct RatioBounds {
  double ratio = 0.0;
  double bound_uniform = 0.0;              // rho(d(p,q)) / d(p,q), always
  std::optional<double> bound_small_pq;    // d(p,q) <= 1: d(p,q)/omega(d(p,q))
  std::optional<double> bound_large_xy;    // d(x,y) >  1: rho(d(x,y))/d(x,y)
  std::optional<double> bound_small_xy;    // d(x,y) <= 1: d(x,y)/omega(d(x,y))
  bool pass = false;                       // ratio below every applicable bound
};

RatioBounds ratio_R(const FiniteMetricSpace& space, const ModulusCurve& rho,
                    const ModulusCurve& omega, int basepoint, int p, int q,
                    int x, int y);

}  // namespace tightembed
