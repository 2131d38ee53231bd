#pragma once

// Fixed-point maps g_w for f(z) = w, schlicht-disk certificates for concrete
// polynomials, the Banach iteration solving g_w(z) = z, and sample-based
// verification of certificates.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bloch/errors.hpp"
#include "bloch/series.hpp"

namespace bloch {

enum class CertificateKind { BanachContraction, EarleHamiltonMapping };

std::string to_string(CertificateKind kind);
CertificateKind certificate_kind_from_string(const std::string& name);

/// A schlicht disk of radius `schlicht_radius` about `image_center = f(b)`,
/// covered injectively from the disk |z - b| <= domain_radius_rho.
struct CertificationResult {
  Complex center_b{0.0, 0.0};
  double domain_radius_rho = 0.0;
  Complex image_center{0.0, 0.0};
  double schlicht_radius = 0.0;
  CertificateKind kind = CertificateKind::EarleHamiltonMapping;
  /// Bound on |g_w'| over the domain disk; equals 1 - sigma for a
  /// Banach certificate.
  double contraction_factor = 0.0;
  /// Whether |b| + rho <= 1. Reported only; never enforced.
  bool inside_unit_disk = false;

  bool operator==(const CertificationResult&) const = default;
};

/// Derivative moduli below this are treated as a vanishing f'(b).
inline constexpr double kDegenerateDerivative = 1e-12;
/// Tolerance on p(0) = 0 and p'(0) = 1 for normalized input.
inline constexpr double kNormalizationTolerance = 1e-12;

/// z -> (w - f(b))/f'(b) + b - sum_{k>=2} f^(k)(b)/(k! f'(b)) (z - b)^k.
///
/// A fixed point z* satisfies f(z*) = w.
class FixedPointMap {
 public:
  FixedPointMap(const Poly& p, Complex b, Complex w);

  Complex operator()(const Complex& z) const;
  /// g_w'(z) = -F2'(z)/f'(b).
  Complex derivative(const Complex& z) const;

  const Complex& center() const { return recentered_.center(); }
  const Complex& target() const { return target_; }
  const Poly& recentered() const { return recentered_; }

 private:
  Poly recentered_;
  Poly remainder_;
  Poly remainder_derivative_;
  Complex slope_;
  Complex target_;
};

FixedPointMap build_gw(const Poly& p, Complex b, Complex w);

struct CertifyOptions {
  MaxModulusOptions max_modulus{};
  /// Emit a Banach certificate when max |g_w'| < 1 on the disk.
  bool upgrade_to_banach = false;
};

/// |f'(b)| rho - max_{|z-b|=rho} |F2(z, b)|, clamped at zero.
CertificationResult certify_schlicht(const Poly& p, Complex b, double rho,
                                     const CertifyOptions& opts = {});

/// Triangle-bound certificate at the origin: rho - sum_{k>=2} |c_k| rho^k.
CertificationResult certify_origin(const Poly& p, double rho);

/// Throws NormalizationError unless p(0) = 0 and p'(0) = 1.
void require_normalized(const Poly& p);

struct SolveOptions {
  double tol = 1e-12;
  long max_iter = 100000;
  /// Keep |z_{n+1} - z_n| for every step taken.
  bool record_steps = false;
};

template <typename Point>
struct FixedPointSolution {
  Point point;
  /// Number of updates z <- g(z) performed.
  long iterations = 0;
  /// |g(point) - point| at termination.
  double residual = 0.0;
  std::vector<double> steps;
};

namespace detail {

inline double distance(const Complex& a, const Complex& b) { return std::abs(a - b); }

template <typename Derived>
double distance(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return (a - b).norm();
}

inline bool all_finite(const Complex& z) { return is_finite(z); }

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <typename Point, typename Map>
FixedPointSolution<Point> fixed_point_iterate(const Map& g, Point start, const Point& center,
                                              double radius, const SolveOptions& opts) {
  if (!(opts.tol > 0)) throw DomainError("banach_solve: tolerance must be positive");
  if (!(radius > 0)) throw DomainError("banach_solve: domain radius must be positive");
  if (opts.max_iter < 1) throw DomainError("banach_solve: max_iter must be positive");
  const double limit = radius * (1.0 + 1e-9);
  if (distance(start, center) > limit) throw DomainEscapeError("banach_solve: start outside domain");

  FixedPointSolution<Point> out{start, 0, 0.0, {}};
  Point z = std::move(start);
  for (long n = 0; n <= opts.max_iter; ++n) {
    Point gz = g(z);
    if (!all_finite(gz)) throw DomainEscapeError("banach_solve: iterate is not finite");
    const double step = distance(gz, z);
    if (step <= opts.tol) {
      out.point = std::move(z);
      out.iterations = n;
      out.residual = step;
      return out;
    }
    if (n == opts.max_iter) break;
    if (distance(gz, center) > limit)
      throw DomainEscapeError("banach_solve: iterate left the domain disk");
    if (opts.record_steps) out.steps.push_back(step);
    z = std::move(gz);
  }
  throw NonConvergenceError("banach_solve: no convergence within max_iter");
}

}  // namespace detail

/// Iterates z <- g(z) from `start` until |g(z) - z| <= tol.
///
/// Throws DomainEscapeError if an iterate leaves the closed disk of radius
/// domain_radius (1 + 1e-9) about domain_center, NonConvergenceError after
/// max_iter updates.
template <typename Map>
FixedPointSolution<Complex> banach_solve(const Map& g, Complex start, Complex domain_center,
                                         double domain_radius, const SolveOptions& opts = {}) {
  return detail::fixed_point_iterate<Complex>(g, start, domain_center, domain_radius, opts);
}

struct VerificationReport {
  long samples = 0;
  long passed = 0;
  long solver_failures = 0;
  long residual_failures = 0;
  long injectivity_collisions = 0;
  double worst_residual = 0.0;
  long max_iterations = 0;
  /// First solver error message, if any.
  std::string first_error;

  long failures() const { return solver_failures + residual_failures + injectivity_collisions; }
  bool ok() const { return failures() == 0 && passed == samples; }
};

struct VerifyOptions {
  SolveOptions solve{};
  double residual_tolerance = 1e-9;
  /// Distinct targets at least this far apart ...
  double injectivity_target_separation = 1e-6;
  /// ... must have solutions at least this far apart.
  double injectivity_solution_separation = 1e-9;
};

/// Sunflower-spiral points strictly inside the disk of radius `radius`.
std::vector<Complex> disk_samples(Complex center, double radius, long n);

/// Solves p(z) = w for quasi-uniform w in the certified image disk and
/// checks residuals and injectivity of w -> z on the sample set.
VerificationReport verify_schlicht_disk(const Poly& p, const CertificationResult& cert,
                                        long n_samples, const VerifyOptions& opts = {});

/// Counts pairs whose targets differ by at least `target_sep` while their
/// solutions lie within `solution_sep` of each other.
template <typename Point>
long count_injectivity_collisions(const std::vector<Point>& targets,
                                  const std::vector<Point>& solutions, double target_sep,
                                  double solution_sep);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct SearchGrid {
  int b_points = 61;
  int rho_points = 61;
  /// Points per axis in the refinement window around the best cell.
  int refine_points = 21;
};

/// Grid search for the best real center b and radius rho, followed by one
/// level of 10x subdivision around the best cell. Ties prefer the smaller b,
/// then the smaller rho.
CertificationResult search_center(const Poly& p, Interval b_range, Interval rho_range,
                                  const SearchGrid& grid = {}, const CertifyOptions& opts = {});

}  // namespace bloch

#include "bloch/detail/injectivity.hpp"
