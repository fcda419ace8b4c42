// SPDX-License-Identifier: Apache-2.0
#include "tightembed/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tightembed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp_knots(const Knot& a, const Knot& b, double t) {
  return a.v + (t - a.t) * (b.v - a.v) / (b.t - a.t);
}

double eval_tail(const Knot& last, const Tail& tail, double t) {
  switch (tail.kind) {
    case Tail::Kind::Affine:
      return last.v + tail.value * (t - last.t);
    case Tail::Kind::Power:
      return last.v * std::pow(t / last.t, tail.value);
  }
  return 0.0;
}

bool nearly(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<double> geometric_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("geometric_grid: need 0 < lo < hi, count >= 2");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] =
        std::pow(10.0, llo + (lhi - llo) * i / (count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_grid() {
  return geometric_grid(kGridLo, kGridHi, kDefaultGridDensity);
}

bool le_slack(double a, double b, double slack) {
  return a <= b + slack * std::max({1.0, std::abs(a), std::abs(b)});
}

bool approx_eq(double a, double b, double slack) {
  return std::abs(a - b) <= slack * std::max({1.0, std::abs(a), std::abs(b)});
}

ModulusCurve ModulusCurve::power_rho(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("power_rho: alpha must lie in (0, 1]");
  ModulusCurve c;
  c.family_ = CurveFamily::PowerRho;
  c.alpha_ = alpha;
  return c;
}

ModulusCurve ModulusCurve::power_omega(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("power_omega: alpha must lie in (0, 1]");
  ModulusCurve c;
  c.family_ = CurveFamily::PowerOmega;
  c.alpha_ = alpha;
  return c;
}

ModulusCurve ModulusCurve::exp_floor() {
  ModulusCurve c;
  c.family_ = CurveFamily::ExpFloor;
  return c;
}

ModulusCurve ModulusCurve::piecewise_linear(std::vector<Knot> knots,
                                            Tail tail) {
  if (knots.empty())
    throw std::invalid_argument("piecewise_linear: need at least one knot");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].v) ||
        knots[i].t < 0.0)
      throw std::invalid_argument("piecewise_linear: knots must be finite, t >= 0");
    if (i > 0 && !(knots[i].t > knots[i - 1].t))
      throw std::invalid_argument(
          "piecewise_linear: knot abscissae must be strictly increasing");
  }
  if (tail.kind == Tail::Kind::Power && (!(tail.value > 0.0) || tail.value > 1.0))
    throw std::invalid_argument("piecewise_linear: power tail exponent in (0, 1]");
  if (tail.kind == Tail::Kind::Power && !(knots.back().t > 0.0))
    throw std::invalid_argument("piecewise_linear: power tail needs last knot t > 0");
  ModulusCurve c;
  c.family_ = CurveFamily::PiecewiseLinear;
  c.knots_ = std::move(knots);
  c.tail_ = tail;
  return c;
}

ModulusCurve ModulusCurve::log2_of(ModulusCurve base) {
  ModulusCurve c;
  c.family_ = CurveFamily::Log2;
  c.base_ = std::make_shared<ModulusCurve>(std::move(base));
  return c;
}

ModulusCurve ModulusCurve::running_sup_floor(ModulusCurve base) {
  ModulusCurve c;
  c.family_ = CurveFamily::RunningSupFloor;
  switch (base.family()) {
    case CurveFamily::ExpFloor:
    case CurveFamily::PowerRho:
    case CurveFamily::PowerOmega:
      break;  // already non-decreasing
    case CurveFamily::PiecewiseLinear:
      c.envelope_ = std::make_shared<ModulusCurve>(running_max(base));
      break;
    default:
      throw std::invalid_argument(
          "running_sup_floor: unsupported base family");
  }
  c.base_ = std::make_shared<ModulusCurve>(std::move(base));
  return c;
}

ModulusCurve ModulusCurve::conjugate(ModulusCurve base) {
  switch (base.family()) {
    case CurveFamily::PowerRho:
      return power_omega(base.alpha());
    case CurveFamily::PowerOmega:
      return power_rho(base.alpha());
    case CurveFamily::Conjugate:
      return *base.base_;
    default:
      break;
  }
  ModulusCurve c;
  c.family_ = CurveFamily::Conjugate;
  c.base_ = std::make_shared<ModulusCurve>(std::move(base));
  return c;
}

double ModulusCurve::eval(double t) const {
  if (!(t >= 0.0))
    throw std::invalid_argument("ModulusCurve::eval: t must be >= 0");
  switch (family_) {
    case CurveFamily::PowerRho:
      return std::min(t, std::pow(t, alpha_));
    case CurveFamily::PowerOmega:
      return std::max(t, std::pow(t, alpha_));
    case CurveFamily::ExpFloor:
      return -std::expm1(-t);
    case CurveFamily::PiecewiseLinear: {
      const Knot first = knots_.front();
      if (t <= first.t) {
        if (t == first.t) return first.v;
        if (first.t == 0.0) return first.v;
        return lerp_knots(Knot{0.0, 0.0}, first, t);
      }
      if (t >= knots_.back().t) {
        if (t == knots_.back().t) return knots_.back().v;
        return eval_tail(knots_.back(), tail_, t);
      }
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), t,
          [](double value, const Knot& k) { return value < k.t; });
      return lerp_knots(*(it - 1), *it, t);
    }
    case CurveFamily::Log2:
      return std::log2(base_->eval(t));
    case CurveFamily::RunningSupFloor: {
      const double sup = envelope_ ? envelope_->eval(t) : base_->eval(t);
      return std::max(sup, -std::expm1(-t));
    }
    case CurveFamily::Conjugate: {
      if (t == 0.0) return 0.0;
      const double b = base_->eval(1.0 / t);
      return b > 0.0 ? 1.0 / b : kInf;
    }
  }
  return 0.0;
}

std::vector<double> ModulusCurve::sample_hints() const {
  std::vector<double> hints;
  switch (family_) {
    case CurveFamily::PiecewiseLinear:
      for (const Knot& k : knots_)
        if (k.t > 0.0) hints.push_back(k.t);
      break;
    case CurveFamily::Conjugate:
      for (double h : base_->sample_hints()) hints.push_back(1.0 / h);
      break;
    case CurveFamily::Log2:
    case CurveFamily::RunningSupFloor:
      hints = base_->sample_hints();
      if (envelope_) {
        auto extra = envelope_->sample_hints();
        hints.insert(hints.end(), extra.begin(), extra.end());
      }
      break;
    default:
      hints.push_back(1.0);
      break;
  }
  return hints;
}

ModulusCurve running_max(const ModulusCurve& pl) {
  if (pl.family() != CurveFamily::PiecewiseLinear)
    throw std::invalid_argument("running_max: expects a piecewise-linear curve");
  const auto& in = pl.knots();
  std::vector<Knot> out;
  out.reserve(in.size() + 2);

  auto emit = [&out](double t, double v) {
    if (!out.empty() && out.back().t == t) {
      out.back().v = std::max(out.back().v, v);
      return;
    }
    out.push_back(Knot{t, v});
  };

  Knot prev = in.front().t > 0.0 ? Knot{0.0, 0.0} : in.front();
  emit(prev.t, prev.v);
  double cur = prev.v;
  const std::size_t start = in.front().t > 0.0 ? 0 : 1;
  for (std::size_t i = start; i < in.size(); ++i) {
    const Knot a = prev;
    const Knot b = in[i];
    if (b.v >= a.v) {  // ascending (or flat) segment
      if (a.v >= cur) {
        emit(a.t, a.v);
        emit(b.t, b.v);
        cur = b.v;
      } else if (b.v > cur) {
        const double cross = a.t + (cur - a.v) * (b.t - a.t) / (b.v - a.v);
        emit(cross, cur);
        emit(b.t, b.v);
        cur = b.v;
      }
      // else: entirely below the running max, envelope stays flat
    } else {  // descending segment
      if (a.v >= cur) {
        cur = a.v;
        emit(a.t, cur);
      }
    }
    prev = b;
  }

  Tail tail = pl.tail();
  const Knot last = in.back();
  const bool tail_rises =
      (tail.kind == Tail::Kind::Affine && tail.value > 0.0) ||
      (tail.kind == Tail::Kind::Power && last.v > 0.0);
  if (!tail_rises) {
    if (out.back().v < cur) emit(last.t, cur);
    tail = Tail{Tail::Kind::Affine, 0.0};
  } else if (last.v < cur) {
    // flat at the current max until the rising tail crosses it
    double cross;
    if (tail.kind == Tail::Kind::Affine)
      cross = last.t + (cur - last.v) / tail.value;
    else
      cross = last.t * std::pow(cur / last.v, 1.0 / tail.value);
    emit(cross, cur);
  } else {
    emit(last.t, last.v);
  }
  return ModulusCurve::piecewise_linear(std::move(out), tail);
}

const char* curve_class_name(CurveClass cls) {
  switch (cls) {
    case CurveClass::Phi:
      return "Phi";
    case CurveClass::P:
      return "P";
    case CurveClass::Omega:
      return "Omega";
  }
  return "?";
}

namespace {

// ---- analytic limit-clause descriptors -------------------------------------

// Values stay strictly below 1 everywhere. Decided analytically: in double
// precision 1 - e^{-t} rounds to exactly 1 for large t, so a strict grid
// comparison cannot witness the half-open range.
bool stays_below_one(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::ExpFloor:
      return true;
    case CurveFamily::PiecewiseLinear: {
      if (c.tail().kind != Tail::Kind::Affine || c.tail().value != 0.0)
        return false;
      for (const Knot& k : c.knots())
        if (!(k.v < 1.0)) return false;
      return true;
    }
    case CurveFamily::RunningSupFloor:
      return true;  // caps at 1 from below by construction
    default:
      return false;
  }
}

bool identity_on_unit(const ModulusCurve& c);

// v(t)/t -> 0 as t -> inf
bool tail_sublinear(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::PowerRho:
      return c.alpha() < 1.0;
    case CurveFamily::ExpFloor:
      return true;
    case CurveFamily::PiecewiseLinear:
      if (c.tail().kind == Tail::Kind::Affine) return c.tail().value == 0.0;
      return c.tail().value < 1.0;
    case CurveFamily::Conjugate:
      // rho(t)/t at infinity equals u/base(u) at zero
      return [](const ModulusCurve& b) {
        switch (b.family()) {
          case CurveFamily::PowerOmega:
            return b.alpha() < 1.0;
          case CurveFamily::Conjugate:
            return tail_sublinear(b.base());
          default:
            return false;
        }
      }(c.base());
    default:
      return false;
  }
}

// v(t)/t -> inf as t -> 0+
bool head_superlinear(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::PowerOmega:
      return c.alpha() < 1.0;
    case CurveFamily::Conjugate:
      return tail_sublinear(c.base());
    default:
      return false;
  }
}

bool head_vanishes(const ModulusCurve& c);

// v(t) -> inf as t -> inf
bool tail_unbounded(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::PowerRho:
    case CurveFamily::PowerOmega:
      return true;
    case CurveFamily::PiecewiseLinear:
      if (c.tail().kind == Tail::Kind::Affine) return c.tail().value > 0.0;
      return c.knots().back().v > 0.0;  // rising power tail
    case CurveFamily::Conjugate:
      // conj grows iff the base vanishes at 0
      return head_vanishes(c.base());
    default:
      return false;
  }
}

// v(t) -> 0 as t -> 0+ (continuity at the origin; a grid cannot witness it
// for conjugated curves, whose value near 0 mirrors the base's tail)
bool head_vanishes(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::Conjugate:
      return tail_unbounded(c.base());
    default:
      return true;  // remaining families interpolate to their value at 0
  }
}

// v(t) = t for every t beyond the grid
bool tail_identity(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::PowerOmega:
      return true;
    case CurveFamily::PiecewiseLinear: {
      const Knot& last = c.knots().back();
      if (!nearly(last.v, last.t)) return false;
      if (c.tail().kind == Tail::Kind::Affine) return c.tail().value == 1.0;
      return c.tail().value == 1.0;
    }
    case CurveFamily::Conjugate:
      return identity_on_unit(c.base());
    default:
      return false;
  }
}

// v(t) = t on all of [0, 1]
bool identity_on_unit(const ModulusCurve& c) {
  switch (c.family()) {
    case CurveFamily::PowerRho:
      return true;
    case CurveFamily::PiecewiseLinear: {
      const auto& ks = c.knots();
      if (!nearly(ks.front().v, ks.front().t)) return false;  // origin chord
      bool reached_one = false;
      for (const Knot& k : ks) {
        if (k.t <= 1.0 + 1e-12) {
          if (!nearly(k.v, k.t)) return false;
          if (nearly(k.t, 1.0)) reached_one = true;
        }
      }
      if (!reached_one && !nearly(c.eval(1.0), 1.0)) return false;
      return true;
    }
    case CurveFamily::Conjugate:
      return tail_identity(c.base());
    default:
      return false;
  }
}

std::vector<double> class_grid(const ModulusCurve& c, int density) {
  auto grid = geometric_grid(kGridLo, kGridHi, density);
  for (double h : c.sample_hints())
    if (h > kGridLo && h < kGridHi) grid.push_back(h);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

ClassReport check_class(const ModulusCurve& curve, CurveClass cls,
                        int grid_density) {
  if (grid_density < 2)
    throw std::invalid_argument("check_class: grid density must be >= 2");
  ClassReport report;
  report.cls = cls;
  report.grid = class_grid(curve, grid_density);
  report.pass = true;

  auto fail = [&report](double t, std::string clause) {
    if (report.pass) {
      report.pass = false;
      report.first_violation = ClassViolation{t, std::move(clause)};
    }
  };

  switch (cls) {
    case CurveClass::Phi: {
      if (curve.eval(0.0) != 0.0) fail(0.0, "phi(0) = 0");
      for (double t : report.grid) {
        if (!report.pass) break;
        const double v = curve.eval(t);
        if (!(v >= 0.0) || !(v <= 1.0)) fail(t, "phi(t) in [0, 1)");
        else if (!(v > 0.0)) fail(t, "phi(t) > 0 for t > 0");
      }
      if (report.pass && !stays_below_one(curve))
        fail(kInf, "phi(t) < 1 (analytic)");
      break;
    }
    case CurveClass::P: {
      for (double t : report.grid) {
        if (!report.pass) break;
        const double v = curve.eval(t);
        if (!(v >= 0.0)) fail(t, "rho(t) >= 0");
        else if (t <= 1.0 && !approx_eq(v, t)) fail(t, "rho(t) = t on [0, 1]");
        else if (t >= 1.0 && !le_slack(v, t)) fail(t, "rho(t) <= t for t >= 1");
      }
      if (report.pass && !tail_sublinear(curve))
        fail(kInf, "lim rho(t)/t = 0 at infinity");
      break;
    }
    case CurveClass::Omega: {
      if (curve.eval(0.0) != 0.0) fail(0.0, "omega(0) = 0");
      for (double t : report.grid) {
        if (!report.pass) break;
        const double v = curve.eval(t);
        if (!(v >= 0.0)) fail(t, "omega(t) >= 0");
        else if (t <= 1.0 && !le_slack(t, v)) fail(t, "omega(t) >= t on [0, 1]");
        else if (t >= 1.0 && !approx_eq(v, t)) fail(t, "omega(t) = t for t >= 1");
      }
      if (report.pass && !head_vanishes(curve))
        fail(0.0, "omega continuous at 0 (omega(0+) = 0)");
      if (report.pass && !head_superlinear(curve))
        fail(0.0, "lim omega(t)/t = inf at 0");
      if (report.pass && !tail_identity(curve))
        fail(kInf, "omega(t) = t for t >= 1 (tail)");
      break;
    }
  }
  return report;
}

ModulusCurve exp_dominate(const ModulusCurve& phi) {
  const ClassReport r = check_class(phi, CurveClass::Phi);
  if (!r.pass)
    throw std::invalid_argument(
        "exp_dominate: curve is not in Phi (violates: " +
        r.first_violation->clause + ")");
  return ModulusCurve::log2_of(ModulusCurve::running_sup_floor(phi));
}

double generalized_inverse(const std::function<double(double)>& mu, double y) {
  if (!(y < 0.0))
    throw std::invalid_argument("generalized_inverse: y must be negative");
  double lo, hi;
  if (mu(1.0) >= y) {
    hi = 1.0;
    lo = 0.5;
    while (mu(lo) >= y) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-320) return 0.0;
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    for (int i = 0; mu(hi) < y; ++i) {
      lo = hi;
      hi *= 2.0;
      if (i > 1100 || std::isinf(hi)) return kInf;  // inf of the empty set
    }
  }
  // invariant: mu(lo) < y <= mu(hi)
  for (int i = 0; i < 200 && hi - lo > kBisectTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (mu(mid) >= y)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double generalized_inverse(const ModulusCurve& mu, double y) {
  return generalized_inverse([&mu](double t) { return mu.eval(t); }, y);
}

namespace {

Tail regularized_tail(const ModulusCurve& rho) {
  switch (rho.family()) {
    case CurveFamily::PowerRho:
      return Tail{Tail::Kind::Power, rho.alpha()};
    case CurveFamily::PiecewiseLinear:
      return rho.tail();
    case CurveFamily::Conjugate: {
      const ModulusCurve& b = rho.base();
      if (b.family() == CurveFamily::Conjugate)
        return regularized_tail(b.base());
      // conj of power_omega is simplified away at construction; any other
      // admissible base behaves like a power head
      if (b.family() == CurveFamily::PiecewiseLinear &&
          b.tail().kind == Tail::Kind::Power)
        return Tail{Tail::Kind::Power, b.tail().value};
      return Tail{Tail::Kind::Affine, 0.0};
    }
    default:
      return Tail{Tail::Kind::Affine, 0.0};
  }
}

}  // namespace

ModulusCurve regularize_rho(const ModulusCurve& rho, int grid_density) {
  const ClassReport r = check_class(rho, CurveClass::P, grid_density);
  if (!r.pass)
    throw std::invalid_argument("regularize_rho: curve is not in P (violates: " +
                                r.first_violation->clause + ")");
  const std::vector<double> grid = r.grid;
  const std::size_t n = grid.size();
  std::vector<double> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = rho.eval(grid[i]) / grid[i];

  // right-to-left: eps <- sup_{s >= t} eps(s); all admissible P tails have
  // non-increasing eps beyond the grid, so the seed is the last sample
  for (std::size_t i = n - 1; i-- > 0;) eps[i] = std::max(eps[i], eps[i + 1]);

  // left-to-right: rho*(t) = sup_{s <= t} s eps(s)
  std::vector<Knot> knots(n);
  double run = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    run = std::max(run, grid[i] * eps[i]);
    knots[i] = Knot{grid[i], run};
  }
  return ModulusCurve::piecewise_linear(std::move(knots), regularized_tail(rho));
}

ModulusCurve regularize_omega(const ModulusCurve& omega, int grid_density) {
  const ClassReport r = check_class(omega, CurveClass::Omega, grid_density);
  if (!r.pass)
    throw std::invalid_argument(
        "regularize_omega: curve is not in Omega (violates: " +
        r.first_violation->clause + ")");
  ModulusCurve conj = ModulusCurve::conjugate(omega);
  ModulusCurve star = regularize_rho(conj, grid_density);
  return ModulusCurve::conjugate(std::move(star));
}

namespace {

bool monotone_with_slope_envelope(const ModulusCurve& c, int grid_density) {
  const auto grid = class_grid(c, grid_density);
  double prev_v = 0.0, prev_ratio = kInf;
  bool first = true;
  for (double t : grid) {
    const double v = c.eval(t);
    const double ratio = v / t;
    if (!first) {
      if (!le_slack(prev_v, v)) return false;            // non-decreasing
      if (!le_slack(ratio, prev_ratio)) return false;    // v/t non-increasing
    }
    prev_v = v;
    prev_ratio = ratio;
    first = false;
  }
  return true;
}

}  // namespace

bool is_regular_rho(const ModulusCurve& rho, int grid_density) {
  return check_class(rho, CurveClass::P, grid_density).pass &&
         monotone_with_slope_envelope(rho, grid_density);
}

bool is_regular_omega(const ModulusCurve& omega, int grid_density) {
  return check_class(omega, CurveClass::Omega, grid_density).pass &&
         monotone_with_slope_envelope(omega, grid_density);
}

}  // namespace tightembed
