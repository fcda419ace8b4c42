// SPDX-License-Identifier: Apache-2.0
#include "tightembed/stable_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tightembed/grid.hpp"
#include "tightembed/parallel.hpp"

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_indices(const FiniteMetricSpace& space, int basepoint, int p, int q) {
  if (basepoint < 0 || basepoint >= space.size())
    throw std::invalid_argument("coordinate: basepoint index out of range");
  if (p < 0 || p >= space.size() || q < 0 || q >= space.size())
    throw std::invalid_argument("coordinate: pair index out of range");
  if (p == q)
    throw std::invalid_argument("coordinate: pair must be distinct (p != q)");
}

double g_raw(const FiniteMetricSpace& space, int basepoint, int p, int q,
             int x) {
  const double dpq = space.distance(p, q);
  return std::max(dpq - space.distance(q, x), 0.0) -
         std::max(dpq - space.distance(q, basepoint), 0.0);
}

}  // namespace

double g_pq(const FiniteMetricSpace& space, int basepoint, int p, int q,
            int x) {
  check_indices(space, basepoint, p, q);
  return g_raw(space, basepoint, p, q, x);
}

double h_pq(const FiniteMetricSpace& space, const ModulusCurve& rho,
            int basepoint, int p, int q, int x) {
  check_indices(space, basepoint, p, q);
  const ClassReport report = check_class(rho, CurveClass::P);
  if (!report.pass)
    throw std::invalid_argument("h_pq: rho is not in P (violates: " +
                                report.first_violation->clause + ")");
  const double dpq = space.distance(p, q);
  return rho.eval(dpq) / dpq * g_raw(space, basepoint, p, q, x);
}

double n_omega(const std::vector<double>& values,
               const FiniteMetricSpace& space, const ModulusCurve& omega) {
  if (static_cast<int>(values.size()) != space.size())
    throw std::invalid_argument("n_omega: one value per point required");
  const ClassReport report = check_class(omega, CurveClass::Omega);
  if (!report.pass)
    throw std::invalid_argument("n_omega: omega is not in Omega (violates: " +
                                report.first_violation->clause + ")");
  double sup = 0.0;
  for (int x = 0; x < space.size(); ++x)
    for (int y = x + 1; y < space.size(); ++y)
      sup = std::max(sup,
                     std::abs(values[static_cast<std::size_t>(y)] -
                              values[static_cast<std::size_t>(x)]) /
                         omega.eval(space.distance(x, y)));
  return sup;
}

int StableEmbedding::coord_index(int p, int q) const {
  return p * (base.size() - 1) + (q < p ? q : q - 1);
}

double StableEmbedding::image_distance(int x, int y) const {
  double sup = 0.0;
  for (const auto& row : table)
    sup = std::max(sup, std::abs(row[static_cast<std::size_t>(x)] -
                                 row[static_cast<std::size_t>(y)]));
  return sup;
}

StableEmbedding embed_stable(const FiniteMetricSpace& space, int basepoint,
                             const ModulusCurve& rho,
                             const ModulusCurve& omega) {
  if (basepoint < 0 || basepoint >= space.size())
    throw std::invalid_argument("stable embedding: basepoint index out of range");
  if (!is_regular_rho(rho))
    throw std::invalid_argument(
        "stable embedding: rho must be regularized (non-decreasing with "
        "rho(t)/t non-increasing); apply regularize_rho first");
  if (!is_regular_omega(omega))
    throw std::invalid_argument(
        "stable embedding: omega must be regularized (non-decreasing with "
        "omega(t)/t non-increasing); apply regularize_omega first");

  const int n = space.size();
  StableEmbedding emb{space, basepoint, rho, omega, {}, {}};
  emb.coords.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (p != q) emb.coords.emplace_back(p, q);

  emb.table.assign(emb.coords.size(),
                   std::vector<double>(static_cast<std::size_t>(n), 0.0));
  parallel_chunks(emb.coords.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const auto [p, q] = emb.coords[c];
      const double dpq = space.distance(p, q);
      const double weight = rho.eval(dpq) / dpq;
      for (int x = 0; x < n; ++x)
        emb.table[c][static_cast<std::size_t>(x)] =
            weight * g_raw(space, basepoint, p, q, x);
    }
  });
  return emb;
}

StableReport verify_stable(const StableEmbedding& embedding) {
  const FiniteMetricSpace& space = embedding.base;
  const int n = space.size();
  const std::size_t pair_count =
      static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;

  StableReport report;
  report.rows.resize(pair_count);

  // two table sweeps: per-coordinate N_omega ratios, then pairwise sup
  // distances; both write disjoint slots
  std::vector<double> sup(pair_count, 0.0);
  std::vector<double> omega_d(pair_count, 0.0);
  std::vector<std::pair<int, int>> pairs(pair_count);
  {
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++idx) {
        pairs[idx] = {i, j};
        omega_d[idx] = embedding.omega.eval(space.distance(i, j));
      }
  }

  std::vector<double> coord_n_omega(embedding.coords.size(), 0.0);
  parallel_chunks(embedding.coords.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const std::vector<double>& row = embedding.table[c];
      double worst_ratio = 0.0;
      for (std::size_t idx = 0; idx < pair_count; ++idx) {
        const double diff = std::abs(row[static_cast<std::size_t>(pairs[idx].first)] -
                                     row[static_cast<std::size_t>(pairs[idx].second)]);
        worst_ratio = std::max(worst_ratio, diff / omega_d[idx]);
      }
      coord_n_omega[c] = worst_ratio;
    }
  });
  parallel_chunks(pair_count, [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t x = static_cast<std::size_t>(pairs[idx].first);
      const std::size_t y = static_cast<std::size_t>(pairs[idx].second);
      double best = 0.0;
      for (const std::vector<double>& row : embedding.table)
        best = std::max(best, std::abs(row[x] - row[y]));
      sup[idx] = best;
    }
  });

  report.n_omega_max = 0.0;
  for (double v : coord_n_omega) report.n_omega_max = std::max(report.n_omega_max, v);

  report.pass = le_slack(report.n_omega_max, 1.0);
  double worst_margin = kInf;
  for (std::size_t idx = 0; idx < pair_count; ++idx) {
    StablePairRow row;
    row.i = pairs[idx].first;
    row.j = pairs[idx].second;
    row.d = space.distance(row.i, row.j);
    row.image_d = sup[idx];
    row.lower = embedding.rho.eval(row.d);
    row.upper = embedding.omega.eval(row.d);
    const std::size_t c =
        static_cast<std::size_t>(embedding.coord_index(row.i, row.j));
    row.attained = std::abs(embedding.table[c][static_cast<std::size_t>(row.i)] -
                            embedding.table[c][static_cast<std::size_t>(row.j)]);
    row.pass = le_slack(row.lower, row.image_d) &&
               le_slack(row.image_d, row.upper) &&
               approx_eq(row.attained, row.lower);
    report.pass = report.pass && row.pass;
    const double margin = std::min(row.image_d - row.lower, row.upper - row.image_d) /
                          std::max(1.0, row.d);
    if (margin < worst_margin) {
      worst_margin = margin;
      report.worst_row = static_cast<int>(idx);
    }
    report.rows[idx] = row;
  }
  return report;
}

FiniteMetricSpace stable_image_metric(const StableEmbedding& embedding) {
  const int n = embedding.base.size();
  std::vector<std::vector<double>> d(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = embedding.image_distance(i, j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  return FiniteMetricSpace::validate(std::move(d));
}

RatioBounds ratio_R(const FiniteMetricSpace& space, const ModulusCurve& rho,
                    const ModulusCurve& omega, int basepoint, int p, int q,
                    int x, int y) {
  check_indices(space, basepoint, p, q);
  check_indices(space, basepoint, x, y);
  const double dpq = space.distance(p, q);
  const double dxy = space.distance(x, y);
  const double weight = rho.eval(dpq) / dpq;
  const double diff = std::abs(g_raw(space, basepoint, p, q, x) -
                               g_raw(space, basepoint, p, q, y));

  RatioBounds out;
  out.ratio = weight * diff / omega.eval(dxy);
  out.bound_uniform = weight;
  if (dpq <= 1.0) out.bound_small_pq = dpq / omega.eval(dpq);
  if (dxy > 1.0) out.bound_large_xy = rho.eval(dxy) / dxy;
  if (dxy <= 1.0) out.bound_small_xy = dxy / omega.eval(dxy);

  out.pass = le_slack(out.ratio, out.bound_uniform);
  if (out.bound_small_pq) out.pass = out.pass && le_slack(out.ratio, *out.bound_small_pq);
  if (out.bound_large_xy) out.pass = out.pass && le_slack(out.ratio, *out.bound_large_xy);
  if (out.bound_small_xy) out.pass = out.pass && le_slack(out.ratio, *out.bound_small_xy);
  return out;
}

}  // namespace tightembed
