// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent oracles for the test suites. Oracles here
// are deliberately naive (dense grids, nested loops) and never call the
// implementation paths they are used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tightembed/certify.hpp"
#include "tightembed/curves.hpp"
#include "tightembed/spaces.hpp"

namespace testutil {

using tightembed::FiniteMetricSpace;
using tightembed::Knot;
using tightembed::LpPointSet;
using tightembed::ModulusCurve;
using tightembed::SeededRng;
using tightembed::Tail;

// points on the real line as a metric space
inline FiniteMetricSpace line_space(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = std::abs(xs[i] - xs[j]);
  return FiniteMetricSpace::validate(std::move(d));
}

// random symmetric matrix repaired into a metric by shortest paths
inline FiniteMetricSpace random_metric(int n, std::uint64_t seed,
                                       double lo = 0.5, double hi = 10.0) {
  SeededRng rng(seed);
  const std::size_t m = static_cast<std::size_t>(n);
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      d[i][j] = d[j][i] = lo + (hi - lo) * rng.next_unit();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return FiniteMetricSpace::validate(std::move(d));
}

// uniform coordinates in [-scale, scale]^dim; index 0 is the origin basepoint
inline LpPointSet random_points_with_origin(int n, int dim, double p,
                                            std::uint64_t seed,
                                            double scale = 1.0) {
  SeededRng rng(seed);
  std::vector<std::vector<double>> coords(static_cast<std::size_t>(n));
  coords[0].assign(static_cast<std::size_t>(dim), 0.0);
  for (int i = 1; i < n; ++i) {
    coords[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(dim));
    for (int c = 0; c < dim; ++c)
      coords[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
          scale * rng.next_symmetric();
  }
  return LpPointSet(p, std::move(coords), 0);
}

inline FiniteMetricSpace transform_image(const FiniteMetricSpace& space,
                                         double (*f)(double, double),
                                         double arg) {
  const int n = space.size();
  std::vector<std::vector<double>> d(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            f(space.distance(i, j), arg);
  return FiniteMetricSpace::validate(std::move(d));
}

inline FiniteMetricSpace snowflake_image(const FiniteMetricSpace& space,
                                         double s) {
  return transform_image(
      space, [](double d, double e) { return std::pow(d, e); }, s);
}

inline FiniteMetricSpace scaled_image(const FiniteMetricSpace& space, double c) {
  return transform_image(space, [](double d, double k) { return k * d; }, c);
}

// random piecewise-linear member of Phi: zero at zero, values in (0, 0.95],
// constant tail
inline ModulusCurve random_phi_pl(std::uint64_t seed, int knot_count = 8) {
  SeededRng rng(seed);
  std::vector<Knot> knots{{0.0, 0.0}};
  double t = 0.0;
  for (int i = 0; i < knot_count; ++i) {
    t += 0.05 + 3.0 * rng.next_unit();
    knots.push_back(Knot{t, 0.02 + 0.93 * rng.next_unit()});
  }
  return ModulusCurve::piecewise_linear(std::move(knots),
                                        Tail{Tail::Kind::Affine, 0.0});
}

// random piecewise-linear member of P: identity on [0, 1], then values below
// the identity with a constant or sublinear power tail (pass force_power_tail
// when the curve is meant to be conjugated into Omega, which needs an
// unbounded tail)
inline ModulusCurve random_rho_pl(std::uint64_t seed, int knot_count = 6,
                                  bool force_power_tail = false) {
  SeededRng rng(seed);
  std::vector<Knot> knots{{0.0, 0.0}, {1.0, 1.0}};
  double t = 1.0;
  for (int i = 0; i < knot_count; ++i) {
    t += 0.2 + 4.0 * rng.next_unit();
    knots.push_back(Knot{t, (0.15 + 0.85 * rng.next_unit()) * t});
  }
  const bool power_tail = force_power_tail || rng.next_unit() < 0.5;
  return ModulusCurve::piecewise_linear(
      std::move(knots), power_tail
                            ? Tail{Tail::Kind::Power, 0.2 + 0.6 * rng.next_unit()}
                            : Tail{Tail::Kind::Affine, 0.0});
}

// dense-grid running-max oracle for the dominating envelope
inline double envelope_oracle(const ModulusCurve& phi, double t, int steps = 20000) {
  double sup = 0.0;
  for (int k = 1; k <= steps; ++k) {
    const double s = t * k / steps;
    sup = std::max({sup, phi.eval(s), -std::expm1(-s)});
  }
  return sup;
}

// nested-sup oracle for the monotone envelope of a P curve, on a fixed grid:
// rho*(t_i) = max_{j <= i} t_j * (max_{k >= j} rho(t_k)/t_k), by brute force
inline std::vector<double> regularize_oracle(const ModulusCurve& rho,
                                             const std::vector<double>& grid) {
  const std::size_t n = grid.size();
  std::vector<double> eps(n);
  for (std::size_t k = 0; k < n; ++k) eps[k] = rho.eval(grid[k]) / grid[k];
  std::vector<double> eps_bar(n);
  for (std::size_t j = 0; j < n; ++j) {
    double sup = 0.0;
    for (std::size_t k = j; k < n; ++k) sup = std::max(sup, eps[k]);
    eps_bar[j] = sup;
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = 0.0;
    for (std::size_t j = 0; j <= i; ++j)
      best = std::max(best, grid[j] * eps_bar[j]);
    out[i] = best;
  }
  return out;
}

// naive double-loop moduli oracle at a realized source distance
inline double rho_hat_oracle(const FiniteMetricSpace& source,
                             const FiniteMetricSpace& image, double t) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < source.size(); ++i)
    for (int j = i + 1; j < source.size(); ++j)
      if (source.distance(i, j) >= t) best = std::min(best, image.distance(i, j));
  return best;
}

inline double omega_hat_oracle(const FiniteMetricSpace& source,
                               const FiniteMetricSpace& image, double t) {
  double best = 0.0;
  for (int i = 0; i < source.size(); ++i)
    for (int j = i + 1; j < source.size(); ++j)
      if (source.distance(i, j) <= t) best = std::max(best, image.distance(i, j));
  return best;
}

}  // namespace testutil
