// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tightembed/block_space.hpp"
#include "tightembed/curves.hpp"
#include "tightembed/spaces.hpp"

namespace tightembed {

/// Parameters of the dyadic-annulus block embedding of a finite l_p point
/// set. Each annulus index k in [k_min, k_max + 1] and scale n in
/// [1, n_max + 1] owns one block of the l_s-sum target; the block holds the
/// coordinate truncation P_{m(k,n)} scaled by 2^-n, where m(k,n) is minimal
/// with truncation error at most sigma(-n)/eta on the ball of radius 2^(k+1).
struct LpEmbeddingPlan {
  double eta = 0.0;      // slack factor, > 2
  double r = 0.0;        // target compression factor, < 1/16
  double outer_s = 2.0;  // exponent of the block sum
  int k_min = 0;
  int k_max = 0;  // annuli realized by nonzero norms; slices span k_max + 1
  int n_max = 0;  // scales are truncated at n_max + 1
  std::vector<double> sigma;  // sigma[i] = generalized inverse at -(i + 1)
  std::vector<std::vector<int>> trunc_dim;  // [k - k_min][n - 1]
  ModulusCurve mu;
  BlockSpace space;

  int slice_count() const { return k_max + 2 - k_min; }
  int scale_count() const { return n_max + 1; }
  // blocks enumerate the finite (k, n) grid row-major
  int block_index(int k, int n) const {
    return (k - k_min) * scale_count() + (n - 1);
  }
  int trunc(int k, int n) const {
    return trunc_dim[static_cast<std::size_t>(k - k_min)]
                    [static_cast<std::size_t>(n - 1)];
  }
};

LpEmbeddingPlan make_plan(const LpPointSet& points, const ModulusCurve& mu,
                          double eta, double r, double outer_s = 2.0);

/// First-m-coordinates truncation; linear and 1-Lipschitz in every l_p norm.
std::vector<double> bap_truncation(const std::vector<double>& x, int m);
double bap_truncation_error(const std::vector<double>& x, int m, double p);

/// Slice map f_k, defined on the ball ||x||_p <= 2^(k+1): places
/// 2^-n P_{m(k,n)} x into block (k, n) for every scale. 1-Lipschitz.
BlockVector slice_embed(const LpEmbeddingPlan& plan, int k,
                        const std::vector<double>& x);

/// The glued map f(x) = lambda_x f_k(x) + (1 - lambda_x) f_{k+1}(x) with
/// lambda_x = (2^(k+1) - ||x||)/2^k on the annulus 2^k <= ||x|| < 2^(k+1);
/// zero-norm points map to 0.
BlockVector embed_point(const LpEmbeddingPlan& plan,
                        const std::vector<double>& x, double p);

struct LpEmbedding {
  LpEmbeddingPlan plan;
  LpPointSet source;
  std::vector<BlockVector> values;
};

LpEmbedding embed(const LpEmbeddingPlan& plan, const LpPointSet& points);

enum class LpPairCase {
  Separated,      // ||x|| <= ||y||/2: image distance <= 3 d
  SameAnnulus,    // image distance <= 5 d
  AdjacentAnnuli  // image distance <= 9 d
};

struct LpPairRow {
  int i = 0, j = 0;
  double d = 0.0;        // source distance
  double image_d = 0.0;  // block-norm distance of the images
  double lower = 0.0;    // 2^mu(d) * r * d
  double upper = 0.0;    // 9 d
  double case_upper = 0.0;
  LpPairCase pair_case = LpPairCase::AdjacentAnnuli;
  bool pass = false;
};

struct LpSandwichReport {
  std::vector<LpPairRow> rows;
  bool pass = false;
  int worst_row = -1;  // smallest normalized margin
  // range-embedding consequence on pairs with d >= sigma(-1)
  double sigma1 = 0.0;
  double r_eff = 0.0;              // r * 2^mu(sigma(-1))
  double range_distortion = 0.0;   // 9 / r_eff
  bool range_pass = false;
};

/// Exhaustive pairwise certification of the two-sided bound
/// 2^mu(d) r d <= ||f(x) - f(y)|| <= 9 d together with the per-case
/// constants 3 and 5. Failures become report rows, never exceptions.
LpSandwichReport verify_sandwich(const LpEmbedding& embedding);

/// Image of the embedding as a metric space (block-norm distances), paired
/// with the source by index.
FiniteMetricSpace lp_image_metric(const LpEmbedding& embedding);

}  // namespace tightembed
