// SPDX-License-Identifier: Apache-2.0
#include "tightembed/lp_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tightembed/grid.hpp"
#include "tightembed/parallel.hpp"

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// mu must be a dominating log-modulus: nonpositive and non-decreasing (in
// double precision log2 of the envelope rounds to 0 for large arguments).
// Limits are not finitely checkable; the bisection bracket handles them.
void validate_mu(const ModulusCurve& mu) {
  const auto grid = geometric_grid(kGridLo, kGridHi, 257);
  double prev = -kInf;
  for (double t : grid) {
    const double v = mu.eval(t);
    if (!(v <= 0.0))
      throw std::invalid_argument(
          "plan: modulus must be nonpositive on (0, inf); got mu(" +
          std::to_string(t) + ") = " + std::to_string(v));
    if (v + 1e-12 < prev)
      throw std::invalid_argument("plan: modulus must be non-decreasing");
    prev = v;
  }
}

std::vector<double> suffix_errors(const std::vector<double>& x, double p) {
  const std::size_t dim = x.size();
  std::vector<double> err(dim + 1, 0.0);
  if (std::isinf(p)) {
    for (std::size_t m = dim; m-- > 0;)
      err[m] = std::max(err[m + 1], std::abs(x[m]));
  } else {
    double acc = 0.0;
    for (std::size_t m = dim; m-- > 0;) {
      acc += p == 1.0 ? std::abs(x[m])
                      : (p == 2.0 ? x[m] * x[m] : std::pow(std::abs(x[m]), p));
      err[m] = p == 1.0 ? acc : (p == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / p));
    }
  }
  return err;
}

}  // namespace

LpEmbeddingPlan make_plan(const LpPointSet& points, const ModulusCurve& mu,
                          double eta, double r, double outer_s) {
  if (!(eta > 2.0)) throw std::invalid_argument("plan: eta must be > 2");
  if (!(r > 0.0) || !(r < 1.0 / 16.0))
    throw std::invalid_argument("plan: r must lie in (0, 1/16)");
  if (!(outer_s >= 1.0))
    throw std::invalid_argument("plan: outer exponent must be >= 1");
  if (points.size() < 2)
    throw std::invalid_argument("plan: need at least two distinct points");
  validate_mu(mu);

  const int n_points = points.size();
  int k_min = 0, k_max = 0;
  bool seen = false;
  for (int i = 0; i < n_points; ++i) {
    const auto k = dyadic_annulus_index(points.norm(i));
    if (!k) continue;
    k_min = seen ? std::min(k_min, *k) : *k;
    k_max = seen ? std::max(k_max, *k) : *k;
    seen = true;
  }
  if (!seen) throw std::invalid_argument("plan: all points have norm zero");

  double d_min = kInf;
  for (int i = 0; i < n_points; ++i)
    for (int j = i + 1; j < n_points; ++j)
      d_min = std::min(d_min, points.distance(i, j));
  if (!(d_min > 0.0)) throw std::invalid_argument("plan: coincident points");

  // n_max = min{ n >= 1 : sigma(-(n+1)) <= d_min }, so the scale block used
  // by the closest pair is still instantiated
  std::vector<double> sigma;
  sigma.push_back(generalized_inverse(mu, -1.0));
  int n_max = 0;
  for (int n = 1;; ++n) {
    const double next = generalized_inverse(mu, -(static_cast<double>(n) + 1.0));
    sigma.push_back(next);
    if (next <= d_min) {
      n_max = n;
      break;
    }
    if (n > 400)
      throw std::invalid_argument(
          "plan: sigma does not reach the minimal distance; modulus decays "
          "too slowly near 0");
  }

  const int slices = k_max + 2 - k_min;
  const int scales = n_max + 1;
  std::vector<std::vector<int>> trunc_dim(
      static_cast<std::size_t>(slices),
      std::vector<int>(static_cast<std::size_t>(scales), 0));

  std::vector<std::vector<double>> errors(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    errors[static_cast<std::size_t>(i)] = suffix_errors(points.point(i), points.p());

  const int dim = points.dim();
  for (int k = k_min; k <= k_max + 1; ++k) {
    const std::vector<int> members = ball_members(points, k);
    std::vector<double> max_err(static_cast<std::size_t>(dim) + 1, 0.0);
    for (int i : members)
      for (int m = 0; m <= dim; ++m)
        max_err[static_cast<std::size_t>(m)] =
            std::max(max_err[static_cast<std::size_t>(m)],
                     errors[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)]);
    int m = 0;
    for (int n = 1; n <= scales; ++n) {
      const double threshold = sigma[static_cast<std::size_t>(n - 1)] / eta;
      while (m < dim && !(max_err[static_cast<std::size_t>(m)] <= threshold)) ++m;
      trunc_dim[static_cast<std::size_t>(k - k_min)]
               [static_cast<std::size_t>(n - 1)] = m;
    }
  }

  std::vector<BlockSpec> blocks;
  blocks.reserve(static_cast<std::size_t>(slices) * static_cast<std::size_t>(scales));
  for (int k = k_min; k <= k_max + 1; ++k)
    for (int n = 1; n <= scales; ++n)
      blocks.push_back(BlockSpec{points.p(),
                                 trunc_dim[static_cast<std::size_t>(k - k_min)]
                                          [static_cast<std::size_t>(n - 1)]});

  return LpEmbeddingPlan{eta,
                         r,
                         outer_s,
                         k_min,
                         k_max,
                         n_max,
                         std::move(sigma),
                         std::move(trunc_dim),
                         mu,
                         BlockSpace(outer_s, std::move(blocks))};
}

std::vector<double> bap_truncation(const std::vector<double>& x, int m) {
  if (m < 0 || m > static_cast<int>(x.size()))
    throw std::invalid_argument("truncation: m out of range");
  std::vector<double> out(x);
  std::fill(out.begin() + m, out.end(), 0.0);
  return out;
}

double bap_truncation_error(const std::vector<double>& x, int m, double p) {
  if (m < 0 || m > static_cast<int>(x.size()))
    throw std::invalid_argument("truncation: m out of range");
  std::vector<double> tail(x.begin() + m, x.end());
  return lp_norm(tail, p);
}

BlockVector slice_embed(const LpEmbeddingPlan& plan, int k,
                        const std::vector<double>& x) {
  if (k < plan.k_min || k > plan.k_max + 1)
    throw std::invalid_argument("slice: annulus index outside the plan");
  const double radius = std::ldexp(1.0, k + 1);
  const double norm = lp_norm(x, plan.space.block(0).p);
  if (norm > radius * (1.0 + 1e-12))
    throw std::invalid_argument("slice: point lies outside the ball of slice " +
                                std::to_string(k));
  BlockVector out;
  for (int n = 1; n <= plan.scale_count(); ++n) {
    const int m = plan.trunc(k, n);
    if (m == 0) continue;
    std::vector<double> coords(x.begin(), x.begin() + m);
    const double weight = std::ldexp(1.0, -n);
    bool all_zero = true;
    for (double& c : coords) {
      c *= weight;
      all_zero = all_zero && c == 0.0;
    }
    if (all_zero) continue;  // canonical sparse form; keeps f(0) = 0 literal
    out.parts.emplace(plan.block_index(k, n), std::move(coords));
  }
  return out;
}

BlockVector embed_point(const LpEmbeddingPlan& plan,
                        const std::vector<double>& x, double p) {
  const double norm = lp_norm(x, p);
  if (norm == 0.0) return BlockVector{};
  const int k = *dyadic_annulus_index(norm);
  if (k < plan.k_min || k > plan.k_max)
    throw std::invalid_argument("embed: point norm outside the plan's annuli");
  const double lambda = (std::ldexp(1.0, k + 1) - norm) / std::ldexp(1.0, k);
  return block_add(block_scale(slice_embed(plan, k, x), lambda),
                   block_scale(slice_embed(plan, k + 1, x), 1.0 - lambda));
}

LpEmbedding embed(const LpEmbeddingPlan& plan, const LpPointSet& points) {
  LpEmbedding out{plan, points, {}};
  out.values.reserve(static_cast<std::size_t>(points.size()));
  for (int i = 0; i < points.size(); ++i)
    out.values.push_back(embed_point(plan, points.point(i), points.p()));
  return out;
}

LpSandwichReport verify_sandwich(const LpEmbedding& embedding) {
  const LpPointSet& pts = embedding.source;
  const LpEmbeddingPlan& plan = embedding.plan;
  const int n = pts.size();

  std::vector<double> norms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) norms[static_cast<std::size_t>(i)] = pts.norm(i);

  LpSandwichReport report;
  report.sigma1 = plan.sigma.empty() ? kInf : plan.sigma.front();
  if (std::isinf(report.sigma1)) {
    // mu never reaches -1: no pair lies in the range window
    report.r_eff = 0.0;
    report.range_distortion = kInf;
  } else {
    report.r_eff = plan.r * std::exp2(plan.mu.eval(report.sigma1));
    report.range_distortion = 9.0 / report.r_eff;
  }
  report.range_pass = true;

  const std::size_t pair_count =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  report.rows.resize(pair_count);

  parallel_chunks(pair_count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      // unrank the pair (i < j)
      std::size_t i = 0, offset = idx;
      while (offset >= static_cast<std::size_t>(n - 1) - i) {
        offset -= static_cast<std::size_t>(n - 1) - i;
        ++i;
      }
      const std::size_t j = i + 1 + offset;

      LpPairRow row;
      row.i = static_cast<int>(i);
      row.j = static_cast<int>(j);
      row.d = pts.distance(row.i, row.j);
      row.image_d = block_norm(
          plan.space, block_subtract(embedding.values[i], embedding.values[j]));
      row.lower = std::exp2(plan.mu.eval(row.d)) * plan.r * row.d;
      row.upper = 9.0 * row.d;

      const double lo = std::min(norms[i], norms[j]);
      const double hi = std::max(norms[i], norms[j]);
      if (lo <= 0.5 * hi) {
        row.pair_case = LpPairCase::Separated;
        row.case_upper = 3.0 * row.d;
      } else if (*dyadic_annulus_index(lo) == *dyadic_annulus_index(hi)) {
        row.pair_case = LpPairCase::SameAnnulus;
        row.case_upper = 5.0 * row.d;
      } else {
        row.pair_case = LpPairCase::AdjacentAnnuli;
        row.case_upper = 9.0 * row.d;
      }
      row.pass = le_slack(row.lower, row.image_d) &&
                 le_slack(row.image_d, row.upper) &&
                 le_slack(row.image_d, row.case_upper);
      report.rows[idx] = row;
    }
  });

  report.pass = true;
  double worst_margin = kInf;
  for (std::size_t idx = 0; idx < report.rows.size(); ++idx) {
    const LpPairRow& row = report.rows[idx];
    report.pass = report.pass && row.pass;
    const double margin =
        std::min({row.image_d - row.lower, row.upper - row.image_d,
                  row.case_upper - row.image_d}) /
        std::max(1.0, row.d);
    if (margin < worst_margin) {
      worst_margin = margin;
      report.worst_row = static_cast<int>(idx);
    }
    if (row.d >= report.sigma1 &&
        !(le_slack(report.r_eff * row.d, row.image_d) &&
          le_slack(row.image_d, row.upper)))
      report.range_pass = false;
  }
  return report;
}

FiniteMetricSpace lp_image_metric(const LpEmbedding& embedding) {
  const int n = embedding.source.size();
  std::vector<std::vector<double>> d(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = block_norm(
          embedding.plan.space,
          block_subtract(embedding.values[static_cast<std::size_t>(i)],
                         embedding.values[static_cast<std::size_t>(j)]));
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  return FiniteMetricSpace::validate(std::move(d));
}

}  // namespace tightembed
