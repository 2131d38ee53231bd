#pragma once

// Univariate complex polynomials / truncated Taylor series about a center.
//
// A Polynomial stores c_k = f^(k)(center)/k! so that
//   f(z) = sum_k c_k (z - center)^k.
// Every operation is a pure function of its arguments.

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "bloch/errors.hpp"

namespace bloch {

template <typename Real>
inline bool is_finite(const std::complex<Real>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

template <typename Real>
class Polynomial {
 public:
  using RealScalar = Real;
  using Scalar = std::complex<Real>;
  using CoeffVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Index = Eigen::Index;

  /// The zero polynomial centered at the origin.
  Polynomial() : center_(0), coeffs_(CoeffVector::Zero(1)) {}

  explicit Polynomial(CoeffVector coeffs, Scalar center = Scalar(0))
      : center_(center), coeffs_(std::move(coeffs)) {
    normalize();
  }

  Polynomial(std::initializer_list<Scalar> coeffs, Scalar center = Scalar(0))
      : center_(center), coeffs_(static_cast<Index>(coeffs.size())) {
    Index k = 0;
    for (const auto& c : coeffs) coeffs_(k++) = c;
    normalize();
  }

  /// z -> z, expanded about `center`.
  static Polynomial identity(Scalar center = Scalar(0)) {
    return Polynomial({center, Scalar(1)}, center);
  }

  const Scalar& center() const { return center_; }
  const CoeffVector& coeffs() const { return coeffs_; }
  Index degree() const { return coeffs_.size() - 1; }
  Index size() const { return coeffs_.size(); }

  /// Coefficient of (z - center)^k; zero beyond the degree.
  Scalar coeff(Index k) const {
    return (k >= 0 && k < coeffs_.size()) ? coeffs_(k) : Scalar(0);
  }

  bool is_zero() const { return coeffs_.size() == 1 && coeffs_(0) == Scalar(0); }

  Scalar operator()(const Scalar& z) const;

 private:
  void normalize() {
    if (!is_finite(center_)) throw DomainError("polynomial center is not finite");
    if (coeffs_.size() == 0) {
      coeffs_ = CoeffVector::Zero(1);
      return;
    }
    for (Index k = 0; k < coeffs_.size(); ++k)
      if (!is_finite(coeffs_(k))) throw DomainError("polynomial coefficient is not finite");
    Index n = coeffs_.size();
    while (n > 1 && coeffs_(n - 1) == Scalar(0)) --n;
    if (n != coeffs_.size()) coeffs_.conservativeResize(n);
  }

  Scalar center_;
  CoeffVector coeffs_;
};

using Poly = Polynomial<double>;
using Complex = std::complex<double>;

/// Sum of c_k (z - center)^k by Horner's scheme.
template <typename Real>
std::complex<Real> eval(const Polynomial<Real>& p, const std::complex<Real>& z) {
  const auto u = z - p.center();
  const auto& c = p.coeffs();
  std::complex<Real> acc = c(c.size() - 1);
  for (auto k = c.size() - 1; k-- > 0;) acc = acc * u + c(k);
  return acc;
}

template <typename Real>
std::complex<Real> Polynomial<Real>::operator()(const Scalar& z) const {
  return eval(*this, z);
}

template <typename Real>
Polynomial<Real> derivative(const Polynomial<Real>& p) {
  using P = Polynomial<Real>;
  using CoeffVector = typename P::CoeffVector;
  if (p.degree() == 0) return P(CoeffVector::Zero(1), p.center());
  CoeffVector d(p.degree());
  for (Eigen::Index k = 0; k < d.size(); ++k) d(k) = Real(k + 1) * p.coeffs()(k + 1);
  return P(std::move(d), p.center());
}

/// Re-expands p about b by repeated synthetic division. The result has
/// center b and coefficients p^(k)(b)/k!.
template <typename Real>
Polynomial<Real> taylor_shift(const Polynomial<Real>& p, const std::complex<Real>& b) {
  if (!is_finite(b)) throw DomainError("taylor_shift: shift point is not finite");
  using P = Polynomial<Real>;
  typename P::CoeffVector a = p.coeffs();
  const auto h = b - p.center();
  const auto n = a.size() - 1;
  if (h != std::complex<Real>(0)) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = n - 1; j >= i; --j) a(j) += h * a(j + 1);
  }
  return P(std::move(a), b);
}

/// The part of order >= 2 about the polynomial's own center,
///   F2(z) = p(z) - p(c) - p'(c)(z - c).
template <typename Real>
Polynomial<Real> nonlinear_part(const Polynomial<Real>& p) {
  typename Polynomial<Real>::CoeffVector c = p.coeffs();
  for (Eigen::Index k = 0; k < std::min<Eigen::Index>(2, c.size()); ++k) c(k) = 0;
  return Polynomial<Real>(std::move(c), p.center());
}

/// Triangle-inequality majorant sum_k |c_k| rho^k of p recentered at c.
template <typename Real>
Real triangle_bound(const Polynomial<Real>& p, const std::complex<Real>& c, Real rho) {
  const auto q = taylor_shift(p, c);
  Real acc = 0;
  for (auto k = q.size(); k-- > 0;) acc = acc * rho + std::abs(q.coeffs()(k));
  return acc;
}

struct MaxModulusOptions {
  /// Equispaced angles sampled before refinement.
  int samples = 4096;
  /// Golden-section iterations on each refinement bracket.
  int refine_iterations = 80;
};

/// Estimate of max_{|z - c| = rho} |p(z)|.
///
/// Samples `samples` equispaced angles, then runs a golden-section search on
/// the angle over the two arcs adjacent to the best sample. The result is
/// clamped to the triangle bound of the recentered polynomial, so it always
/// lies between the best sampled modulus and that bound. It is a sampling
/// estimate, not a rigorous enclosure.
template <typename Real>
Real max_modulus_circle(const Polynomial<Real>& p, const std::complex<Real>& c, Real rho,
                        const MaxModulusOptions& opts = {}) {
  if (!(rho > 0) || !std::isfinite(rho))
    throw DomainError("max_modulus_circle: radius must be positive");
  if (opts.samples < 3) throw DomainError("max_modulus_circle: need at least 3 samples");
  const auto q = taylor_shift(p, c);
  if (q.is_zero()) return Real(0);

  auto modulus = [&](Real theta) {
    return std::abs(eval(q, c + std::polar(rho, theta)));
  };

  const Real step = Real(2) * std::numbers::pi_v<Real> / Real(opts.samples);
  Real best = Real(-1);
  int best_idx = 0;
  for (int i = 0; i < opts.samples; ++i) {
    const Real m = modulus(step * Real(i));
    if (m > best) {
      best = m;
      best_idx = i;
    }
  }

  // Golden-section refinement on [theta_{i-1}, theta_{i+1}].
  const Real inv_phi = (std::sqrt(Real(5)) - Real(1)) / Real(2);
  Real lo = step * Real(best_idx - 1);
  Real hi = step * Real(best_idx + 1);
  Real x1 = hi - inv_phi * (hi - lo);
  Real x2 = lo + inv_phi * (hi - lo);
  Real f1 = modulus(x1);
  Real f2 = modulus(x2);
  for (int it = 0; it < opts.refine_iterations; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = modulus(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = modulus(x1);
    }
  }
  best = std::max({best, f1, f2});

  Real majorant = 0;
  for (auto k = q.size(); k-- > 0;) majorant = majorant * rho + std::abs(q.coeffs()(k));
  return std::min(best, majorant);
}

/// Cauchy estimate for |f^(k)(beta)| given M >= max |f'| on a circle of
/// radius d about beta: M (k-1)! / d^(k-1).
template <typename Real>
Real cauchy_derivative_bound(Real max_modulus, Real d, int k) {
  if (!(d > 0)) throw DomainError("cauchy_derivative_bound: distance must be positive");
  if (k < 1) throw DomainError("cauchy_derivative_bound: order must be at least 1");
  if (max_modulus < 0) throw DomainError("cauchy_derivative_bound: modulus must be nonnegative");
  Real factorial = 1;
  for (int j = 2; j < k; ++j) factorial *= Real(j);
  return max_modulus * factorial / std::pow(d, Real(k - 1));
}

}  // namespace bloch
