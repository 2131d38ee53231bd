#include "bloch/wu.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace bloch {

namespace {

void require_dim(int m) {
  if (m < 1 || m > kMaxDimension)
    throw DomainError("dimension must lie in [1, " + std::to_string(kMaxDimension) + "]");
}

Complex ipow(const Complex& z, int k) {
  Complex acc(1.0, 0.0);
  for (int i = 0; i < k; ++i) acc *= z;
  return acc;
}

int total(const MultiIndex& k) {
  int s = 0;
  for (int v : k) s += v;
  return s;
}

/// Calls visit(point) for every element of the product set axes[0] x ... x axes[m-1].
template <typename Visit>
void for_each_product(const std::vector<std::vector<Complex>>& axes, Visit&& visit) {
  const std::size_t m = axes.size();
  std::vector<std::size_t> idx(m, 0);
  CVector z(static_cast<Eigen::Index>(m));
  while (true) {
    for (std::size_t j = 0; j < m; ++j) z(static_cast<Eigen::Index>(j)) = axes[j][idx[j]];
    visit(z);
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
    if (m == 0) return;
  }
}

std::vector<Complex> circle_points(double radius, int n) {
  std::vector<Complex> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) pts.push_back(std::polar(radius, 2.0 * std::numbers::pi * a / n));
  return pts;
}

double operator_norm(const CMatrix& A) {
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

PolyMap nonlinear_part(const PolyMap& G) {
  std::vector<MultiPoly> comps;
  for (const auto& c : G.components()) {
    std::vector<Monomial> terms;
    for (const auto& t : c.terms())
      if (total(t.k) >= 2) terms.push_back(t);
    comps.emplace_back(c.dim(), std::move(terms));
  }
  return PolyMap(std::move(comps));
}

}  // namespace

MultiPoly::MultiPoly(int dim, std::vector<Monomial> terms) : dim_(dim) {
  require_dim(dim);
  std::map<MultiIndex, Complex> merged;
  for (auto& t : terms) {
    if (static_cast<int>(t.k.size()) != dim)
      throw DomainError("multi-index length does not match the dimension");
    for (int v : t.k)
      if (v < 0) throw DomainError("multi-index entries must be nonnegative");
    if (!is_finite(t.c)) throw DomainError("coefficient is not finite");
    merged[t.k] += t.c;
  }
  for (auto& [k, c] : merged)
    if (c != Complex(0.0)) terms_.push_back(Monomial{k, c});
}

int MultiPoly::total_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, total(t.k));
  return d;
}

Complex MultiPoly::eval(const CVector& z) const {
  if (z.size() != dim_) throw DomainError("point dimension does not match the polynomial");
  Complex acc(0.0, 0.0);
  for (const auto& t : terms_) {
    Complex term = t.c;
    for (int j = 0; j < dim_; ++j) term *= ipow(z(j), t.k[static_cast<std::size_t>(j)]);
    acc += term;
  }
  return acc;
}

MultiPoly MultiPoly::partial(int j) const {
  if (j < 0 || j >= dim_) throw DomainError("partial: variable index out of range");
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    const int kj = t.k[static_cast<std::size_t>(j)];
    if (kj == 0) continue;
    Monomial d = t;
    d.c *= static_cast<double>(kj);
    d.k[static_cast<std::size_t>(j)] = kj - 1;
    out.push_back(std::move(d));
  }
  return MultiPoly(dim_, std::move(out));
}

PolyMap::PolyMap(std::vector<MultiPoly> components) : components_(std::move(components)) {
  const int m = dim();
  require_dim(m);
  for (const auto& c : components_)
    if (c.dim() != m) throw DomainError("every component must have m variables");
}

PolyMap PolyMap::identity(int m) {
  require_dim(m);
  std::vector<MultiPoly> comps;
  for (int i = 0; i < m; ++i) {
    MultiIndex k(static_cast<std::size_t>(m), 0);
    k[static_cast<std::size_t>(i)] = 1;
    comps.emplace_back(m, std::vector<Monomial>{{k, Complex(1.0)}});
  }
  return PolyMap(std::move(comps));
}

CVector eval_map(const PolyMap& F, const CVector& z) {
  CVector out(F.dim());
  for (int i = 0; i < F.dim(); ++i) out(i) = F.component(i).eval(z);
  return out;
}

CMatrix jacobian(const PolyMap& F, const CVector& z) {
  const int m = F.dim();
  CMatrix J(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) J(i, j) = F.component(i).partial(j).eval(z);
  return J;
}

PolyMap taylor_shift(const PolyMap& F, const CVector& beta) {
  const int m = F.dim();
  if (beta.size() != m) throw DomainError("taylor_shift: center dimension mismatch");
  if (!beta.allFinite()) throw DomainError("taylor_shift: center is not finite");

  std::vector<MultiPoly> comps;
  for (const auto& comp : F.components()) {
    std::vector<Monomial> expanded;
    for (const auto& t : comp.terms()) {
      // prod_j (beta_j + u_j)^{k_j} = prod_j sum_i C(k_j, i) beta_j^{k_j - i} u_j^i
      std::vector<Monomial> partial{{MultiIndex(static_cast<std::size_t>(m), 0), t.c}};
      for (int j = 0; j < m; ++j) {
        const int kj = t.k[static_cast<std::size_t>(j)];
        std::vector<Monomial> next;
        double binom = 1.0;
        for (int i = 0; i <= kj; ++i) {
          const Complex factor = binom * ipow(beta(j), kj - i);
          for (const auto& p : partial) {
            Monomial q = p;
            q.k[static_cast<std::size_t>(j)] = i;
            q.c *= factor;
            next.push_back(std::move(q));
          }
          binom = binom * (kj - i) / (i + 1);
        }
        partial = std::move(next);
      }
      expanded.insert(expanded.end(), partial.begin(), partial.end());
    }
    comps.emplace_back(m, std::move(expanded));
  }
  return PolyMap(std::move(comps));
}

JacobianStats matrix_stats(const CMatrix& A) {
  if (A.rows() != A.cols() || A.rows() < 1) throw DomainError("matrix_stats: need a square matrix");
  const auto m = static_cast<double>(A.rows());
  Eigen::JacobiSVD<CMatrix> svd(A);
  const auto& s = svd.singularValues();
  JacobianStats st;
  st.lambda_max = s(0);
  st.lambda_min = s(s.size() - 1);
  st.det_modulus = std::abs(A.determinant());
  if (st.det_modulus > 0.0) {
    st.wu_ratio = st.lambda_max / std::pow(st.det_modulus, 1.0 / m);
  }
  st.degenerate = !(st.det_modulus > 0.0) || !std::isfinite(st.wu_ratio);
  return st;
}

JacobianStats jacobian_stats(const PolyMap& F, const CVector& z) {
  if (z.size() != F.dim()) throw DomainError("jacobian_stats: point dimension mismatch");
  JacobianStats st = matrix_stats(jacobian(F, z));
  st.at_point = z;
  return st;
}

WuKEstimate estimate_wu_K(const PolyMap& F, double polydisk_radius, int grid_per_axis,
                          const WuGridOptions& opts) {
  if (!(polydisk_radius > 0.0)) throw DomainError("estimate_wu_K: radius must be positive");
  if (grid_per_axis < 1 || opts.radial_levels < 1)
    throw DomainError("estimate_wu_K: grid sizes must be positive");

  std::vector<Complex> axis{Complex(0.0)};
  for (int l = 1; l <= opts.radial_levels; ++l) {
    const auto ring = circle_points(polydisk_radius * l / opts.radial_levels, grid_per_axis);
    axis.insert(axis.end(), ring.begin(), ring.end());
  }
  const std::vector<std::vector<Complex>> axes(static_cast<std::size_t>(F.dim()), axis);

  WuKEstimate est;
  est.argmax = CVector::Zero(F.dim());
  for_each_product(axes, [&](const CVector& z) {
    ++est.points;
    const auto st = matrix_stats(jacobian(F, z));
    if (st.degenerate) {
      est.degenerate = true;
      return;
    }
    if (st.wu_ratio > est.K) {
      est.K = st.wu_ratio;
      est.argmax = z;
    }
  });
  return est;
}

bool check_small_eigen(const PolyMap& F, const CVector& z, double K) {
  if (!(K > 0.0)) throw DomainError("check_small_eigen: K must be positive");
  const auto st = jacobian_stats(F, z);
  const double m = F.dim();
  return st.lambda_min >= std::pow(K, -(m - 1.0)) * std::pow(st.det_modulus, 1.0 / m) - 1e-10;
}

FixedPointMapMv::FixedPointMapMv(const PolyMap& F, const CVector& beta, const CVector& w)
    : beta_(beta) {
  if (beta.size() != F.dim() || w.size() != F.dim())
    throw DomainError("build_gw_mv: dimension mismatch");
  if (!w.allFinite()) throw DomainError("build_gw_mv: target is not finite");
  const CMatrix A = jacobian(F, beta);
  const auto st = matrix_stats(A);
  if (st.degenerate || st.lambda_min < kDegenerateDerivative)
    throw DegenerateCenterError("singular Jacobian at the expansion center");
  inverse_ = A.inverse();
  remainder_ = nonlinear_part(taylor_shift(F, beta));
  offset_ = inverse_ * (w - eval_map(F, beta));
}

CVector FixedPointMapMv::operator()(const CVector& z) const {
  return beta_ + offset_ - inverse_ * eval_map(remainder_, z - beta_);
}

CMatrix FixedPointMapMv::derivative(const CVector& z) const {
  return -inverse_ * jacobian(remainder_, z - beta_);
}

FixedPointMapMv build_gw_mv(const PolyMap& F, const CVector& beta, const CVector& w) {
  return FixedPointMapMv(F, beta, w);
}

MvCertificationResult certify_schlicht_mv(const PolyMap& F, const CVector& beta, double eta,
                                          double sigma, const MvCertifyOptions& opts) {
  const int m = F.dim();
  if (beta.size() != m) throw DomainError("certify_schlicht_mv: center dimension mismatch");
  if (!(eta > 0.0)) throw DomainError("certify_schlicht_mv: eta must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("certify_schlicht_mv: sigma must lie in (0, 1)");
  if (opts.torus_points < 1) throw DomainError("certify_schlicht_mv: torus_points must be positive");

  const CMatrix A = jacobian(F, beta);
  const auto st = matrix_stats(A);
  if (st.degenerate || st.lambda_min < kDegenerateDerivative)
    throw DegenerateCenterError("singular Jacobian at the expansion center");
  const CMatrix inverse = A.inverse();
  const PolyMap remainder = nonlinear_part(taylor_shift(F, beta));

  MvCertificationResult cert;
  cert.beta = beta;
  cert.eta = eta;
  cert.sigma = sigma;
  cert.image_center = eval_map(F, beta);
  cert.lambda_min = st.lambda_min;
  cert.inverse_norm = 1.0 / st.lambda_min;

  double remainder_max = 0.0;
  const std::vector<std::vector<Complex>> axes(static_cast<std::size_t>(m),
                                               circle_points(eta, opts.torus_points));
  for_each_product(axes, [&](const CVector& u) {
    cert.contraction_factor =
        std::max(cert.contraction_factor, operator_norm(inverse * jacobian(remainder, u)));
    remainder_max = std::max(remainder_max, eval_map(remainder, u).norm());
  });
  cert.mapping_margin = eta - cert.inverse_norm * remainder_max;
  cert.contraction_holds = cert.contraction_factor <= 1.0 - sigma;

  std::ostringstream diag;
  if (cert.contraction_holds) {
    cert.schlicht_radius = sigma * eta * st.lambda_min;
    diag << "contraction factor " << cert.contraction_factor << " <= 1 - sigma = " << 1.0 - sigma;
  } else {
    cert.schlicht_radius = 0.0;
    diag << "rejected: contraction factor " << cert.contraction_factor << " exceeds 1 - sigma = "
         << 1.0 - sigma << "; shrink eta or sigma";
  }
  cert.diagnostic = diag.str();
  return cert;
}

std::vector<CVector> ball_samples(const CVector& center, double radius, long n,
                                  unsigned long long seed) {
  std::vector<CVector> out;
  if (n <= 0) return out;
  const auto m = center.size();
  const double real_dim = 2.0 * static_cast<double>(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  out.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    CVector dir(m);
    for (Eigen::Index j = 0; j < m; ++j) dir(j) = Complex(normal(rng), normal(rng));
    const double len = dir.norm();
    if (len == 0.0) {
      out.push_back(center);
      continue;
    }
    const double r = radius * std::pow(uniform(rng), 1.0 / real_dim);
    out.push_back(center + dir * (r / len));
  }
  return out;
}

VerificationReport verify_schlicht_mv(const PolyMap& F, const MvCertificationResult& cert,
                                      long n_samples, const VerifyOptions& opts) {
  VerificationReport report;
  report.samples = n_samples;
  if (n_samples <= 0) return report;
  if (!(cert.schlicht_radius > 0.0)) {
    report.solver_failures = n_samples;
    report.first_error = "certificate has no positive schlicht radius";
    return report;
  }

  std::vector<CVector> targets;
  std::vector<CVector> solutions;
  for (const CVector& w : ball_samples(cert.image_center, cert.schlicht_radius, n_samples)) {
    try {
      const auto g = build_gw_mv(F, cert.beta, w);
      const auto sol = banach_solve_mv(g, cert.beta, cert.beta, cert.eta, opts.solve);
      const double residual = (eval_map(F, sol.point) - w).norm();
      report.worst_residual = std::max(report.worst_residual, residual);
      report.max_iterations = std::max(report.max_iterations, sol.iterations);
      if (residual > opts.residual_tolerance) {
        ++report.residual_failures;
        continue;
      }
      targets.push_back(w);
      solutions.push_back(sol.point);
    } catch (const std::exception& e) {
      ++report.solver_failures;
      if (report.first_error.empty()) report.first_error = e.what();
    }
  }
  report.injectivity_collisions =
      count_injectivity_collisions(targets, solutions, opts.injectivity_target_separation,
                                   opts.injectivity_solution_separation);
  report.passed = static_cast<long>(solutions.size());
  return report;
}

}  // namespace bloch
