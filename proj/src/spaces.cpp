// SPDX-License-Identifier: Apache-2.0
#include "tightembed/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tightembed/grid.hpp"

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

}  // namespace

FiniteMetricSpace FiniteMetricSpace::validate(
    std::vector<std::vector<double>> d) {
  const int n = static_cast<int>(d.size());
  if (n == 0) throw std::invalid_argument("metric: empty matrix");
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(d[static_cast<std::size_t>(i)].size()) != n)
      throw std::invalid_argument("metric: matrix is not square at row " +
                                  std::to_string(i));
  FiniteMetricSpace space;
  space.n_ = n;
  space.d_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double v = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!std::isfinite(v))
        throw std::invalid_argument("metric: non-finite entry at " + at(i, j));
      if (v < 0.0)
        throw std::invalid_argument("metric: negative entry at " + at(i, j));
      space.d_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(j)] = v;
    }
  for (int i = 0; i < n; ++i) {
    if (space.distance(i, i) != 0.0)
      throw std::invalid_argument("metric: nonzero diagonal at index " +
                                  std::to_string(i));
    for (int j = i + 1; j < n; ++j) {
      if (space.distance(i, j) != space.distance(j, i))
        throw std::invalid_argument("metric: asymmetry at " + at(i, j));
      if (!(space.distance(i, j) > 0.0))
        throw std::invalid_argument("metric: zero distance between distinct points " +
                                    at(i, j));
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (space.distance(i, k) >
            space.distance(i, j) + space.distance(j, k) +
                kSlack * std::max(1.0, space.distance(i, k)))
          throw std::invalid_argument(
              "metric: triangle violation at " + at(i, k) + ": d" + at(i, k) +
              " > d" + at(i, j) + " + d" + at(j, k));
  return space;
}

double FiniteMetricSpace::min_positive_distance() const {
  double best = kInf;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) best = std::min(best, distance(i, j));
  return best;
}

double FiniteMetricSpace::diameter() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) best = std::max(best, distance(i, j));
  return best;
}

std::vector<std::vector<double>> FiniteMetricSpace::matrix() const {
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    m[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          distance(i, j);
  }
  return m;
}

double lp_norm(const std::vector<double>& x, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double c : x) m = std::max(m, std::abs(c));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double c : x) s += std::abs(c);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double c : x) s += c * c;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double c : x) s += std::pow(std::abs(c), p);
  return std::pow(s, 1.0 / p);
}

double lp_distance(const std::vector<double>& x, const std::vector<double>& y,
                   double p) {
  std::vector<double> diff(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y[i];
  return lp_norm(diff, p);
}

LpPointSet::LpPointSet(double p, std::vector<std::vector<double>> points,
                       std::optional<int> basepoint)
    : p_(p), points_(std::move(points)), basepoint_(basepoint) {
  if (!(p >= 1.0)) throw std::invalid_argument("point set: p must be >= 1");
  if (points_.empty()) throw std::invalid_argument("point set: no points");
  dim_ = static_cast<int>(points_.front().size());
  if (dim_ == 0) throw std::invalid_argument("point set: zero dimension");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (static_cast<int>(points_[i].size()) != dim_)
      throw std::invalid_argument("point set: ragged coordinates at index " +
                                  std::to_string(i));
    for (double c : points_[i])
      if (!std::isfinite(c))
        throw std::invalid_argument("point set: non-finite coordinate at index " +
                                    std::to_string(i));
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      if (points_[i] == points_[j])
        throw std::invalid_argument(
            "point set: duplicate points at indices (" + std::to_string(i) +
            ", " + std::to_string(j) + ")");
  if (basepoint_) {
    if (*basepoint_ < 0 || *basepoint_ >= size())
      throw std::invalid_argument("point set: basepoint index out of range");
    if (norm(*basepoint_) != 0.0)
      throw std::invalid_argument("point set: basepoint must have norm 0");
  }
}

double LpPointSet::norm(int i) const {
  return lp_norm(points_[static_cast<std::size_t>(i)], p_);
}

double LpPointSet::distance(int i, int j) const {
  return lp_distance(points_[static_cast<std::size_t>(i)],
                     points_[static_cast<std::size_t>(j)], p_);
}

FiniteMetricSpace LpPointSet::metric() const {
  const int n = size();
  std::vector<std::vector<double>> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    d[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = distance(i, j);
      d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  return FiniteMetricSpace::validate(std::move(d));
}

std::optional<int> dyadic_annulus_index(double norm) {
  if (!(norm >= 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("annulus index: norm must be finite and >= 0");
  if (norm == 0.0) return std::nullopt;
  return std::ilogb(norm);
}

std::vector<int> ball_members(const LpPointSet& set, int k) {
  const double radius = std::ldexp(1.0, k + 1);
  std::vector<int> members;
  for (int i = 0; i < set.size(); ++i)
    if (set.norm(i) <= radius) members.push_back(i);
  return members;
}

std::vector<int> epsilon_net(const FiniteMetricSpace& space, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("epsilon_net: delta must be > 0");
  std::vector<int> net;
  for (int i = 0; i < space.size(); ++i) {
    bool covered = false;
    for (int r : net)
      if (space.distance(i, r) <= delta) {
        covered = true;
        break;
      }
    if (!covered) net.push_back(i);
  }
  return net;
}

std::vector<int> nearest_net_map(const FiniteMetricSpace& space,
                                 const std::vector<int>& net) {
  if (net.empty()) throw std::invalid_argument("nearest_net_map: empty net");
  std::vector<int> assign(static_cast<std::size_t>(space.size()));
  for (int i = 0; i < space.size(); ++i) {
    int best = net.front();
    double best_d = space.distance(i, best);
    for (int r : net) {
      const double d = space.distance(i, r);
      if (d < best_d) {
        best = r;
        best_d = d;
      }
    }
    assign[static_cast<std::size_t>(i)] = best;
  }
  return assign;
}

std::uint64_t SeededRng::next_u64() {
  // splitmix64
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SeededRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::next_symmetric() { return 2.0 * next_unit() - 1.0; }

int SeededRng::next_below(int bound) {
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
}

std::vector<double> kalton_default_weights(int truncation) {
  std::vector<double> a(static_cast<std::size_t>(truncation));
  double w = 1.0;
  for (int i = 0; i < truncation; ++i) {
    w *= 0.25;
    a[static_cast<std::size_t>(i)] = w;
  }
  return a;
}

LpPointSet kalton_compact_sample(double p, int truncation,
                                 const std::vector<double>& weights, int count,
                                 std::uint64_t seed) {
  if (truncation < 1)
    throw std::invalid_argument("kalton sample: truncation must be >= 1");
  if (static_cast<int>(weights.size()) != truncation)
    throw std::invalid_argument("kalton sample: need one weight per coordinate");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0))
      throw std::invalid_argument("kalton sample: weights must be positive");
    if (i > 0 && weights[i] > weights[i - 1])
      throw std::invalid_argument("kalton sample: weights must be non-increasing");
    sum += weights[i];
  }
  if (sum > 1.0 + 1e-12)
    throw std::invalid_argument(
        "kalton sample: weight sum exceeds 1 (sum = " + std::to_string(sum) + ")");

  const std::size_t dim = static_cast<std::size_t>(truncation);
  std::vector<std::vector<double>> pts;
  pts.reserve(1 + 2 * dim + static_cast<std::size_t>(count));
  pts.emplace_back(dim, 0.0);  // the origin, S(0)
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> plus(dim, 0.0), minus(dim, 0.0);
    plus[i] = weights[i];
    minus[i] = -weights[i];
    pts.push_back(std::move(plus));
    pts.push_back(std::move(minus));
  }
  SeededRng rng(seed);
  while (static_cast<int>(pts.size()) < 1 + 2 * truncation + count) {
    std::vector<double> dir(dim);
    for (std::size_t i = 0; i < dim; ++i) dir[i] = rng.next_symmetric();
    const double norm = lp_norm(dir, p);
    if (!(norm > 0.0)) continue;
    const double radius =
        std::pow(rng.next_unit(), 1.0 / static_cast<double>(truncation));
    std::vector<double> point(dim);
    for (std::size_t i = 0; i < dim; ++i)
      point[i] = weights[i] * radius * dir[i] / norm;
    if (std::find(pts.begin(), pts.end(), point) != pts.end()) continue;
    pts.push_back(std::move(point));
  }
  return LpPointSet(p, std::move(pts), 0);
}

LpPointSet kalton_compact_sample(double p, int truncation, int count,
                                 std::uint64_t seed) {
  return kalton_compact_sample(p, truncation, kalton_default_weights(truncation),
                               count, seed);
}

}  // namespace tightembed
