// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace tightembed {

// Comparison slack used throughout: absolute for magnitudes up to 1,
// relative beyond that.
inline constexpr double kSlack = 1e-9;
inline constexpr double kBisectTol = 1e-12;

// Default certification grid: geometric on [1e-6, 1e6]. An odd count makes
// the grid hit t = 1 exactly and keeps it closed under t -> 1/t.
inline constexpr double kGridLo = 1e-6;
inline constexpr double kGridHi = 1e6;
inline constexpr int kDefaultGridDensity = 4001;

std::vector<double> geometric_grid(double lo, double hi, int count);
std::vector<double> default_grid();

// a <= b up to slack, a == b up to slack.
bool le_slack(double a, double b, double slack = kSlack);
bool approx_eq(double a, double b, double slack = kSlack);

}  // namespace tightembed
