// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tightembed/spaces.hpp"

namespace tightembed {

/// Empirical compression / expansion moduli of a correspondence between two
/// equal-size spaces (paired by index):
///   rho_hat(t) = min image distance over pairs with source distance >= t,
///   omega_hat(t) = max image distance over pairs with source distance <= t,
/// tabulated at the realized source distances.
struct ModulusProfile {
  std::vector<double> t;          // sorted distinct source distances
  std::vector<double> rho_hat;    // non-decreasing
  std::vector<double> omega_hat;  // non-decreasing

  // queries between realized distances follow the inf/sup definitions:
  // rho at t uses pairs with distance >= t (+inf when none), omega uses
  // pairs with distance <= t (0 when none)
  double rho_at(double t) const;
  double omega_at(double t) const;
};

ModulusProfile measure_moduli(const FiniteMetricSpace& source,
                              const FiniteMetricSpace& image);

struct CheckedPair {
  int i = 0, j = 0;
  double d = 0.0;
  double image_d = 0.0;
  bool pass = false;
};

/// Two-sided bound r d <= image_d <= D r d on exactly the pairs whose source
/// distance lies in [s1, s2] (s2 may be +inf). Isometric mode is r = D = 1.
struct RangeReport {
  double s1 = 0.0, s2 = 0.0, r = 1.0, distortion = 1.0;
  std::vector<CheckedPair> rows;  // pairs inside the range only
  bool pass = false;
  int worst_row = -1;  // smallest margin against either bound
};

RangeReport range_check(const FiniteMetricSpace& source,
                        const FiniteMetricSpace& image, double s1, double s2,
                        double r, double distortion);

/// Snowflake-quality check for an exponent s in (0, 1): per pair
/// image_d <= max{d, d^s}, and through the profile rho_hat(t) >= min{t, t^s}
/// at every realized distance.
struct SnowflakeReport {
  double exponent = 0.5;
  std::vector<CheckedPair> pair_rows;  // upper bound per pair
  struct ProfileRow {
    double t = 0.0, rho_hat = 0.0, bound = 0.0;
    bool pass = false;
  };
  std::vector<ProfileRow> profile_rows;
  bool pass = false;
};

SnowflakeReport snowflake_check(const FiniteMetricSpace& source,
                                const FiniteMetricSpace& image, double s);

/// Certificate-style estimate of the compression exponent: with
/// C = max over all pairs of max{image_d / d, 1}, returns the largest alpha
/// (clamped to [0, 1]) such that image_d >= d^alpha / C on every pair with
/// d > max(tau, 1). The (alpha, C) pair is a witness on this sample, not a
/// supremum over maps.
struct CompressionEstimate {
  double alpha = 0.0;
  double scale = 1.0;  // the witness constant C
  double tau = 0.0;
  int pairs_used = 0;
};

CompressionEstimate compression_exponent_estimate(
    const FiniteMetricSpace& source, const FiniteMetricSpace& image,
    double tau);

}  // namespace tightembed
