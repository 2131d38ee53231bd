#pragma once

// Closed-form lower bounds for Bloch-type constants and the grid optimizers
// that maximize them over their free parameters.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>

#include "bloch/errors.hpp"

namespace bloch {

/// Free parameters (gamma, sigma) of a one- or m-variable bound.
struct BoundParams {
  double gamma = 0.0;
  double sigma = 0.0;
  double value = 0.0;

  bool operator==(const BoundParams&) const = default;
};

/// Parameters of the Earle-Hamilton bound: ball radius rho, Cauchy radius r,
/// and the worst-case coefficient moduli (a2, a3) of f'.
struct EHParams {
  double rho = 0.0;
  double r = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  /// rho - max penalty.
  double value = 0.0;

  bool operator==(const EHParams&) const = default;
};

// ---------------------------------------------------------------------------
// Radius of the first expansion point

/// exp(-1/(g-1) + 1/(2(g^2-1)) - 1/(3(g^3-1))), a lower bound for
/// 1 / prod_{j>=1} (1 + g^-j).
double beta_lower_E(double gamma);

/// 1 / prod_{j>=1} (1 + g^-j), truncated once g^-j < tol. The neglected
/// log-remainder is at most g^-J/(g-1).
double product_radius(double gamma, double tol = 1e-16);

// ---------------------------------------------------------------------------
// One-variable bounds

/// ((s+1)/2) ((1-s)/(1-s+g)) (1/g) beta_lower_E(g), with M(beta) = 1.
double bloch_bound_v1(double gamma, double sigma);

/// bloch_bound_v1 without the 1/g factor.
double bloch_bound_v2(double gamma, double sigma);

// ---------------------------------------------------------------------------
// Optimizer

struct Box2 {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
};

struct Optimize2dOptions {
  int coarse_points = 201;
  int refine_rounds = 3;
  /// Each refinement round divides the step by this factor.
  int refine_factor = 10;
  /// Called for every coarse grid point, in row-major (x outer) order.
  std::function<void(double, double, double)> on_coarse_point;
};

struct Optimum2d {
  double x = 0.0;
  double y = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  long evaluations = 0;
};

/// Coarse grid plus local refinement rounds around the incumbent. The
/// objective may return NaN to mark an infeasible point. Ties keep the
/// lexicographically smallest (x, y). Fully deterministic.
Optimum2d optimize_2d(const std::function<double(double, double)>& f, const Box2& box,
                      const Optimize2dOptions& opts = {});

/// gamma in (1, 50], sigma in [1e-6, 1 - 1e-6].
Box2 default_bound_box();

BoundParams optimize_bound(double (*bound)(double, double), const Optimize2dOptions& opts = {});

// ---------------------------------------------------------------------------
// Earle-Hamilton bound under the Landau normalization

/// (1/r^2) sqrt(max((2-r^2)/(1-r^2)^2 - a2^2 r^2, 0)).
double a3_cap(double r, double a2);

/// (a2/3) rho^3 + (a3/4) rho^4
///   + (r^2/5) sqrt(max((2-r^2)/(1-r^2)^2 - a2^2 r^2 - a3^2 r^4, 0))
///     (rho/r)^5 / (1 - rho/r).
///
/// The radicand uses a3^2 r^4, matching the coefficient inequality it is
/// derived from.
double eh_penalty(double rho, double r, double a2, double a3);

struct EHOptions {
  int coarse_points = 401;
  int refine_rounds = 3;
  std::function<void(double, double, double)> on_coarse_point;
};

/// Maximizes eh_penalty over feasible (a2, a3) and returns rho - max.
EHParams eh_bound(double rho, double r, const EHOptions& opts = {});

// ---------------------------------------------------------------------------
// Wu K-mappings

/// s(1-s)/((2-s) 2^m) K^{-(3m-1)/2} beta_lower_E(g)/g.
double wu_bound(int m, double K, double gamma, double sigma);

/// The two branch estimates, with |beta|_inf replaced by beta_lower_E(g):
///   first  = s(1-s)/((2-s)2^m) det^{1/m} / (K^{2m-1} g^2) beta_lower_E(g)
///   second = s(1-s)/((2-s)2^m) / (K^m det^{1/m})           beta_lower_E(g)
std::pair<double, double> wu_branch_bounds(int m, double K, double gamma, double sigma,
                                           double det_modulus);

/// max over (gamma, sigma) of wu_bound(m, K, ., .); multiplied by m^{-1/2}
/// for maps on the unit ball instead of the polydisk.
BoundParams theorem_bound_mv(int m, double K, bool ball_domain = false,
                             const Optimize2dOptions& opts = {});

}  // namespace bloch
