// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tightembed/grid.hpp"

namespace tightembed {

/// One-dimensional modulus curves. The closed-form families cover the
/// specification vocabulary (power_rho, power_omega, exp_floor, pl); the
/// composite families (log2 of a curve, running-sup floor, reciprocal
/// conjugate) exist so that derived curves -- dominating log-moduli and
/// regularized expansion moduli -- stay exactly evaluable and keep analytic
/// tail descriptors instead of being flattened to samples.
enum class CurveFamily {
  PowerRho,         // min{t, t^alpha}
  PowerOmega,       // max{t, t^alpha}
  ExpFloor,         // 1 - e^{-t}
  PiecewiseLinear,  // interpolated knots, declared tail
  Log2,             // log2(base(t))
  RunningSupFloor,  // max{ sup_{s<=t} base(s), 1 - e^{-t} }
  Conjugate,        // 1 / base(1/t), 0 at 0
};

struct Tail {
  enum class Kind { Affine, Power };
  Kind kind = Kind::Affine;
  double value = 0.0;  // Affine: slope; Power: exponent in (0, 1]
};

struct Knot {
  double t = 0.0;
  double v = 0.0;
};

class ModulusCurve {
 public:
  static ModulusCurve power_rho(double alpha);
  static ModulusCurve power_omega(double alpha);
  static ModulusCurve exp_floor();
  // Knots strictly increasing in t. Evaluation below the first knot
  // interpolates from the origin; beyond the last knot the tail applies.
  static ModulusCurve piecewise_linear(std::vector<Knot> knots, Tail tail);
  static ModulusCurve log2_of(ModulusCurve base);
  static ModulusCurve running_sup_floor(ModulusCurve base);
  // Simplifies power conjugates (power_omega <-> power_rho) and collapses
  // double conjugation.
  static ModulusCurve conjugate(ModulusCurve base);

  /// Evaluate at t >= 0 (throws std::invalid_argument on negative t).
  double eval(double t) const;
  double operator()(double t) const { return eval(t); }

  CurveFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  const std::vector<Knot>& knots() const { return knots_; }
  const Tail& tail() const { return tail_; }
  const ModulusCurve& base() const { return *base_; }

  /// Abscissae worth adding to a certification grid (knot locations, plus
  /// their reciprocals for conjugated curves), restricted to t > 0.
  std::vector<double> sample_hints() const;

 private:
  ModulusCurve() = default;

  CurveFamily family_ = CurveFamily::ExpFloor;
  double alpha_ = 0.0;
  std::vector<Knot> knots_;
  Tail tail_;
  std::shared_ptr<const ModulusCurve> base_;
  std::shared_ptr<const ModulusCurve> envelope_;  // RunningSupFloor cache
};

/// Exact running maximum of a piecewise-linear curve (including its origin
/// segment and declared tail), again piecewise linear.
ModulusCurve running_max(const ModulusCurve& pl);

enum class CurveClass { Phi, P, Omega };

struct ClassViolation {
  double t = 0.0;  // +inf marks a tail clause, 0 marks a head clause
  std::string clause;
};

struct ClassReport {
  CurveClass cls = CurveClass::Phi;
  std::vector<double> grid;
  bool pass = false;
  std::optional<ClassViolation> first_violation;
};

const char* curve_class_name(CurveClass cls);

/// Certify membership in Phi / P / Omega. Pointwise clauses are checked on a
/// geometric grid (augmented with the curve's own knots); limit clauses are
/// decided from the family's analytic tail, never from samples.
ClassReport check_class(const ModulusCurve& curve, CurveClass cls,
                        int grid_density = kDefaultGridDensity);

/// Dominating log-modulus of a Phi curve: log2 of the running sup of
/// max{phi, 1 - e^{-t}}. Non-decreasing, maps (0,inf) onto (-inf,0), and
/// phi(t) <= 2^{mu(t)} for every t > 0. Throws if phi is not in Phi.
ModulusCurve exp_dominate(const ModulusCurve& phi);

/// Generalized inverse sigma(y) = inf{ x > 0 : mu(x) >= y } of a
/// non-decreasing mu, by bracketing bisection to absolute tolerance 1e-12.
/// Requires y < 0; returns +inf when no x in range satisfies mu(x) >= y.
double generalized_inverse(const std::function<double(double)>& mu, double y);
double generalized_inverse(const ModulusCurve& mu, double y);

/// Monotone envelope of a P curve: with eps(t) = rho(t)/t, replace eps by its
/// non-increasing right sup, then eps*(t) = sup_{s<=t} s eps(s) / t. The
/// result (a piecewise-linear curve on the grid) dominates rho, is
/// non-decreasing, has rho*(t)/t non-increasing, and stays in P.
ModulusCurve regularize_rho(const ModulusCurve& rho,
                            int grid_density = kDefaultGridDensity);

/// Same for an Omega curve through the reciprocal conjugation
/// t -> 1/t: omega* = conj(regularize_rho(conj(omega))), with omega*(0) = 0.
ModulusCurve regularize_omega(const ModulusCurve& omega,
                              int grid_density = kDefaultGridDensity);

/// Hypotheses required of already-regularized curves: membership in the
/// class, non-decreasing values, and v(t)/t non-increasing on the grid.
bool is_regular_rho(const ModulusCurve& rho,
                    int grid_density = kDefaultGridDensity);
bool is_regular_omega(const ModulusCurve& omega,
                      int grid_density = kDefaultGridDensity);

}  // namespace tightembed
