// SPDX-License-Identifier: Apache-2.0
#include "tightembed/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tightembed/grid.hpp"

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct PairSample {
  int i, j;
  double d, image_d;
};

std::vector<PairSample> paired_distances(const FiniteMetricSpace& source,
                                         const FiniteMetricSpace& image) {
  if (source.size() != image.size())
    throw std::invalid_argument(
        "certify: cardinality mismatch between source and image");
  std::vector<PairSample> pairs;
  pairs.reserve(static_cast<std::size_t>(source.size()) *
                static_cast<std::size_t>(source.size() - 1) / 2);
  for (int i = 0; i < source.size(); ++i)
    for (int j = i + 1; j < source.size(); ++j)
      pairs.push_back(PairSample{i, j, source.distance(i, j), image.distance(i, j)});
  return pairs;
}

}  // namespace

double ModulusProfile::rho_at(double query) const {
  // inf of image distances over pairs with source distance >= query
  auto it = std::lower_bound(t.begin(), t.end(), query);
  if (it == t.end()) return kInf;
  return rho_hat[static_cast<std::size_t>(it - t.begin())];
}

double ModulusProfile::omega_at(double query) const {
  // sup of image distances over pairs with source distance <= query
  auto it = std::upper_bound(t.begin(), t.end(), query);
  if (it == t.begin()) return 0.0;
  return omega_hat[static_cast<std::size_t>(it - t.begin()) - 1];
}

ModulusProfile measure_moduli(const FiniteMetricSpace& source,
                              const FiniteMetricSpace& image) {
  std::vector<PairSample> pairs = paired_distances(source, image);
  std::sort(pairs.begin(), pairs.end(),
            [](const PairSample& a, const PairSample& b) { return a.d < b.d; });

  ModulusProfile profile;
  if (pairs.empty()) return profile;

  // suffix minima of image distances at each distinct source distance
  const std::size_t m = pairs.size();
  std::vector<double> suffix_min(m);
  double acc = kInf;
  for (std::size_t k = m; k-- > 0;) {
    acc = std::min(acc, pairs[k].image_d);
    suffix_min[k] = acc;
  }
  double prefix_max = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    prefix_max = std::max(prefix_max, pairs[k].image_d);
    const bool last_of_value = k + 1 == m || pairs[k + 1].d != pairs[k].d;
    if (!last_of_value) continue;
    const std::size_t first_of_value =
        static_cast<std::size_t>(std::lower_bound(pairs.begin(), pairs.end(),
                                                  pairs[k].d,
                                                  [](const PairSample& a, double v) {
                                                    return a.d < v;
                                                  }) -
                                 pairs.begin());
    profile.t.push_back(pairs[k].d);
    profile.rho_hat.push_back(suffix_min[first_of_value]);
    profile.omega_hat.push_back(prefix_max);
  }
  return profile;
}

RangeReport range_check(const FiniteMetricSpace& source,
                        const FiniteMetricSpace& image, double s1, double s2,
                        double r, double distortion) {
  if (!(s1 > 0.0) || !(s2 >= s1))
    throw std::invalid_argument("range check: need 0 < s1 <= s2");
  if (!(r > 0.0) || !(distortion >= 1.0))
    throw std::invalid_argument("range check: need r > 0 and D >= 1");
  RangeReport report;
  report.s1 = s1;
  report.s2 = s2;
  report.r = r;
  report.distortion = distortion;
  report.pass = true;
  double worst_margin = kInf;
  for (const PairSample& pair : paired_distances(source, image)) {
    if (pair.d < s1 || pair.d > s2) continue;
    CheckedPair row{pair.i, pair.j, pair.d, pair.image_d, false};
    row.pass = le_slack(r * pair.d, pair.image_d) &&
               le_slack(pair.image_d, distortion * r * pair.d);
    report.pass = report.pass && row.pass;
    const double margin = std::min(pair.image_d - r * pair.d,
                                   distortion * r * pair.d - pair.image_d) /
                          std::max(1.0, pair.d);
    if (margin < worst_margin) {
      worst_margin = margin;
      report.worst_row = static_cast<int>(report.rows.size());
    }
    report.rows.push_back(row);
  }
  return report;
}

SnowflakeReport snowflake_check(const FiniteMetricSpace& source,
                                const FiniteMetricSpace& image, double s) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("snowflake check: exponent must lie in (0, 1)");
  SnowflakeReport report;
  report.exponent = s;
  report.pass = true;
  for (const PairSample& pair : paired_distances(source, image)) {
    CheckedPair row{pair.i, pair.j, pair.d, pair.image_d, false};
    row.pass = le_slack(pair.image_d, std::max(pair.d, std::pow(pair.d, s)));
    report.pass = report.pass && row.pass;
    report.pair_rows.push_back(row);
  }
  const ModulusProfile profile = measure_moduli(source, image);
  for (std::size_t k = 0; k < profile.t.size(); ++k) {
    SnowflakeReport::ProfileRow row;
    row.t = profile.t[k];
    row.rho_hat = profile.rho_hat[k];
    row.bound = std::min(row.t, std::pow(row.t, s));
    row.pass = le_slack(row.bound, row.rho_hat);
    report.pass = report.pass && row.pass;
    report.profile_rows.push_back(row);
  }
  return report;
}

CompressionEstimate compression_exponent_estimate(
    const FiniteMetricSpace& source, const FiniteMetricSpace& image,
    double tau) {
  const std::vector<PairSample> pairs = paired_distances(source, image);
  const double threshold = std::max(tau, 1.0);

  CompressionEstimate estimate;
  estimate.tau = tau;
  estimate.scale = 1.0;
  for (const PairSample& pair : pairs)
    estimate.scale = std::max(estimate.scale, pair.image_d / pair.d);

  double alpha = 1.0;
  for (const PairSample& pair : pairs) {
    if (!(pair.d > threshold)) continue;
    ++estimate.pairs_used;
    const double candidate =
        std::log(estimate.scale * pair.image_d) / std::log(pair.d);
    alpha = std::min(alpha, std::clamp(candidate, 0.0, 1.0));
  }
  if (estimate.pairs_used == 0)
    throw std::invalid_argument(
        "compression exponent: no pair above the threshold max(tau, 1)");
  estimate.alpha = alpha;
  return estimate;
}

}  // namespace tightembed
