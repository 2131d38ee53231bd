#pragma once

// Polynomial maps C^m -> C^m (m <= 4): evaluation, Jacobian singular values,
// sampled Wu constants, and multivariate fixed-point certificates.

#include <complex>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bloch/contraction.hpp"
#include "bloch/errors.hpp"

namespace bloch {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using MultiIndex = std::vector<int>;

inline constexpr int kMaxDimension = 4;

struct Monomial {
  MultiIndex k;
  Complex c;

  bool operator==(const Monomial&) const = default;
};

/// One component sum_k c_k z^k. Terms are kept sorted by multi-index with
/// duplicates merged and exact zeros dropped.
class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(int dim, std::vector<Monomial> terms);

  int dim() const { return dim_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  int total_degree() const;

  Complex eval(const CVector& z) const;
  /// d/dz_j.
  MultiPoly partial(int j) const;

  bool operator==(const MultiPoly&) const = default;

 private:
  int dim_ = 0;
  std::vector<Monomial> terms_;
};

/// F = (F_1, ..., F_m) with every component in m variables.
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::vector<MultiPoly> components);

  static PolyMap identity(int m);

  int dim() const { return static_cast<int>(components_.size()); }
  const std::vector<MultiPoly>& components() const { return components_; }
  const MultiPoly& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }

  bool operator==(const PolyMap&) const = default;

 private:
  std::vector<MultiPoly> components_;
};

CVector eval_map(const PolyMap& F, const CVector& z);
CMatrix jacobian(const PolyMap& F, const CVector& z);

/// F(beta + u) as a polynomial map in u.
PolyMap taylor_shift(const PolyMap& F, const CVector& beta);

struct JacobianStats {
  CVector at_point;
  /// Smallest singular value of F'(z).
  double lambda_min = 0.0;
  /// Largest singular value, the operator norm.
  double lambda_max = 0.0;
  double det_modulus = 0.0;
  /// lambda_max / det^{1/m}; infinite when det vanishes.
  double wu_ratio = std::numeric_limits<double>::infinity();
  bool degenerate = false;
};

JacobianStats jacobian_stats(const PolyMap& F, const CVector& z);
JacobianStats matrix_stats(const CMatrix& A);

struct WuKEstimate {
  /// Sup of the wu ratio over the sample set (a lower bound for the true K).
  double K = 0.0;
  CVector argmax;
  long points = 0;
  /// A point with vanishing determinant was sampled.
  bool degenerate = false;
};

struct WuGridOptions {
  /// Radial levels per axis: radius * l / levels, l = 1..levels, plus 0.
  int radial_levels = 4;
};

/// Sup of wu_ratio over a product grid of the polydisk |z_j| <= radius:
/// per axis the origin plus `grid_per_axis` angles on each radial level.
WuKEstimate estimate_wu_K(const PolyMap& F, double polydisk_radius, int grid_per_axis,
                          const WuGridOptions& opts = {});

/// lambda_min >= K^{-(m-1)} det^{1/m} - 1e-10.
bool check_small_eigen(const PolyMap& F, const CVector& z, double K);

/// Result of a multivariate certificate about beta on the ball |z - beta| <= eta.
struct MvCertificationResult {
  CVector beta;
  double eta = 0.0;
  double sigma = 0.0;
  CVector image_center;
  double lambda_min = 0.0;
  /// ||F'(beta)^{-1}|| = 1 / lambda_min.
  double inverse_norm = 0.0;
  /// Sampled sup of ||F'(beta)^{-1} R'(u)|| on the torus |u_j| = eta.
  double contraction_factor = 0.0;
  /// eta - ||F'(beta)^{-1}|| max |R(u)| on the same torus.
  double mapping_margin = 0.0;
  /// sigma eta lambda_min when contraction_factor <= 1 - sigma, else 0.
  double schlicht_radius = 0.0;
  bool contraction_holds = false;
  std::string diagnostic;
};

struct MvCertifyOptions {
  /// Angles per coordinate on the torus.
  int torus_points = 16;
};

/// z -> beta + F'(beta)^{-1} (w - F(beta) - R(z - beta)).
class FixedPointMapMv {
 public:
  FixedPointMapMv(const PolyMap& F, const CVector& beta, const CVector& w);

  CVector operator()(const CVector& z) const;
  /// Jacobian of the map at z.
  CMatrix derivative(const CVector& z) const;

  const CVector& beta() const { return beta_; }

 private:
  PolyMap remainder_;
  CVector beta_;
  CVector offset_;
  CMatrix inverse_;
};

FixedPointMapMv build_gw_mv(const PolyMap& F, const CVector& beta, const CVector& w);

MvCertificationResult certify_schlicht_mv(const PolyMap& F, const CVector& beta, double eta,
                                          double sigma, const MvCertifyOptions& opts = {});

/// Multivariate Banach iteration; Euclidean norm on C^m.
template <typename Map>
FixedPointSolution<CVector> banach_solve_mv(const Map& g, const CVector& start,
                                            const CVector& center, double radius,
                                            const SolveOptions& opts = {}) {
  return detail::fixed_point_iterate<CVector>(g, start, center, radius, opts);
}

/// Deterministic quasi-uniform points strictly inside the Euclidean ball of
/// C^m with the given center and radius.
std::vector<CVector> ball_samples(const CVector& center, double radius, long n,
                                  unsigned long long seed = 20011u);

VerificationReport verify_schlicht_mv(const PolyMap& F, const MvCertificationResult& cert,
                                      long n_samples, const VerifyOptions& opts = {});

}  // namespace bloch
