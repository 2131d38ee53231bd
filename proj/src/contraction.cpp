#include "bloch/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace bloch {

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::BanachContraction:
      return "BanachContraction";
    case CertificateKind::EarleHamiltonMapping:
      return "EarleHamiltonMapping";
  }
  return "unknown";
}

CertificateKind certificate_kind_from_string(const std::string& name) {
  if (name == "BanachContraction") return CertificateKind::BanachContraction;
  if (name == "EarleHamiltonMapping") return CertificateKind::EarleHamiltonMapping;
  throw DomainError("unknown certificate kind: " + name);
}

namespace {

Poly recenter_checked(const Poly& p, Complex b) {
  if (!is_finite(b)) throw DomainError("expansion center is not finite");
  Poly q = taylor_shift(p, b);
  if (std::abs(q.coeff(1)) < kDegenerateDerivative) {
    std::ostringstream msg;
    msg << "degenerate center: |f'(b)| = " << std::abs(q.coeff(1)) << " at b = " << b;
    throw DegenerateCenterError(msg.str());
  }
  return q;
}

}  // namespace

FixedPointMap::FixedPointMap(const Poly& p, Complex b, Complex w)
    : recentered_(recenter_checked(p, b)),
      remainder_(nonlinear_part(recentered_)),
      remainder_derivative_(bloch::derivative(remainder_)),
      slope_(recentered_.coeff(1)),
      target_(w) {
  if (!is_finite(w)) throw DomainError("target value is not finite");
}

Complex FixedPointMap::operator()(const Complex& z) const {
  return center() + (target_ - recentered_.coeff(0) - eval(remainder_, z)) / slope_;
}

Complex FixedPointMap::derivative(const Complex& z) const {
  return -eval(remainder_derivative_, z) / slope_;
}

FixedPointMap build_gw(const Poly& p, Complex b, Complex w) { return FixedPointMap(p, b, w); }

CertificationResult certify_schlicht(const Poly& p, Complex b, double rho,
                                     const CertifyOptions& opts) {
  if (!(rho > 0) || !std::isfinite(rho)) throw DomainError("certify_schlicht: rho must be positive");
  const Poly q = recenter_checked(p, b);
  const Poly f2 = nonlinear_part(q);
  const double slope = std::abs(q.coeff(1));
  const double f2_max = max_modulus_circle(f2, b, rho, opts.max_modulus);
  const double f2_prime_max = max_modulus_circle(derivative(f2), b, rho, opts.max_modulus);

  CertificationResult cert;
  cert.center_b = b;
  cert.domain_radius_rho = rho;
  cert.image_center = q.coeff(0);
  cert.schlicht_radius = std::max(0.0, slope * rho - f2_max);
  cert.contraction_factor = f2_prime_max / slope;
  cert.kind = (opts.upgrade_to_banach && cert.contraction_factor < 1.0)
                  ? CertificateKind::BanachContraction
                  : CertificateKind::EarleHamiltonMapping;
  cert.inside_unit_disk = std::abs(b) + rho <= 1.0;
  return cert;
}

void require_normalized(const Poly& p) {
  const Poly q = taylor_shift(p, Complex(0.0));
  if (std::abs(q.coeff(0)) > kNormalizationTolerance ||
      std::abs(q.coeff(1) - Complex(1.0)) > kNormalizationTolerance)
    throw NormalizationError("polynomial is not normalized: need p(0) = 0 and p'(0) = 1");
}

CertificationResult certify_origin(const Poly& p, double rho) {
  if (!(rho > 0) || !std::isfinite(rho)) throw DomainError("certify_origin: rho must be positive");
  require_normalized(p);
  const Poly q = taylor_shift(p, Complex(0.0));

  double tail = 0.0;
  double tail_slope = 0.0;
  for (Eigen::Index k = q.degree(); k >= 2; --k) {
    const double c = std::abs(q.coeff(k));
    tail += c * std::pow(rho, static_cast<double>(k));
    tail_slope += static_cast<double>(k) * c * std::pow(rho, static_cast<double>(k - 1));
  }

  CertificationResult cert;
  cert.center_b = Complex(0.0);
  cert.domain_radius_rho = rho;
  cert.image_center = Complex(0.0);
  cert.schlicht_radius = std::max(0.0, rho - tail);
  cert.kind = CertificateKind::EarleHamiltonMapping;
  cert.contraction_factor = tail_slope;
  cert.inside_unit_disk = rho <= 1.0;
  return cert;
}

std::vector<Complex> disk_samples(Complex center, double radius, long n) {
  std::vector<Complex> out;
  if (n <= 0) return out;
  out.reserve(static_cast<std::size_t>(n));
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (long i = 0; i < n; ++i) {
    const double r = radius * std::sqrt((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    out.push_back(center + std::polar(r, golden_angle * static_cast<double>(i)));
  }
  return out;
}

VerificationReport verify_schlicht_disk(const Poly& p, const CertificationResult& cert,
                                        long n_samples, const VerifyOptions& opts) {
  VerificationReport report;
  report.samples = n_samples;
  if (n_samples <= 0) return report;
  if (!(cert.schlicht_radius > 0) || !(cert.domain_radius_rho > 0)) {
    report.solver_failures = n_samples;
    report.first_error = "certificate has no positive schlicht radius";
    return report;
  }

  std::vector<Complex> targets;
  std::vector<Complex> solutions;
  targets.reserve(static_cast<std::size_t>(n_samples));
  solutions.reserve(static_cast<std::size_t>(n_samples));

  for (const Complex& w : disk_samples(cert.image_center, cert.schlicht_radius, n_samples)) {
    try {
      const auto g = build_gw(p, cert.center_b, w);
      const auto sol =
          banach_solve(g, cert.center_b, cert.center_b, cert.domain_radius_rho, opts.solve);
      const double residual = std::abs(eval(p, sol.point) - w);
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

namespace {

struct Candidate {
  double b = 0.0;
  double rho = 0.0;
  CertificationResult cert;
};

bool better(const Candidate& a, const std::optional<Candidate>& incumbent) {
  if (!incumbent) return true;
  const double va = a.cert.schlicht_radius;
  const double vb = incumbent->cert.schlicht_radius;
  if (va != vb) return va > vb;
  if (a.b != incumbent->b) return a.b < incumbent->b;
  return a.rho < incumbent->rho;
}

double grid_point(const Interval& range, int i, int n) {
  if (n == 1) return range.lo;
  return range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

void scan(const Poly& p, const Interval& bs, const Interval& rhos, int nb, int nrho,
          const CertifyOptions& opts, std::optional<Candidate>& best) {
  for (int i = 0; i < nb; ++i) {
    const double b = grid_point(bs, i, nb);
    for (int j = 0; j < nrho; ++j) {
      const double rho = grid_point(rhos, j, nrho);
      try {
        Candidate c{b, rho, certify_schlicht(p, Complex(b, 0.0), rho, opts)};
        if (better(c, best)) best = c;
      } catch (const DegenerateCenterError&) {
        // f'(b) = 0: skip the cell
      }
    }
  }
}

}  // namespace

CertificationResult search_center(const Poly& p, Interval b_range, Interval rho_range,
                                  const SearchGrid& grid, const CertifyOptions& opts) {
  require_normalized(p);
  if (!(b_range.lo > -1.0 && b_range.hi < 1.0 && b_range.lo <= b_range.hi))
    throw DomainError("search_center: b range must lie in (-1, 1)");
  if (!(rho_range.lo > 0.0 && rho_range.hi < 2.0 && rho_range.lo <= rho_range.hi))
    throw DomainError("search_center: rho range must lie in (0, 2)");
  if (grid.b_points < 1 || grid.rho_points < 1 || grid.refine_points < 1)
    throw DomainError("search_center: grid sizes must be positive");

  std::optional<Candidate> best;
  scan(p, b_range, rho_range, grid.b_points, grid.rho_points, opts, best);
  if (!best) throw SearchFailureError("search_center: every grid center is degenerate");

  const double db = grid.b_points > 1 ? (b_range.hi - b_range.lo) / (grid.b_points - 1) : 0.0;
  const double drho =
      grid.rho_points > 1 ? (rho_range.hi - rho_range.lo) / (grid.rho_points - 1) : 0.0;
  const Interval b_window{std::max(b_range.lo, best->b - db), std::min(b_range.hi, best->b + db)};
  const Interval rho_window{std::max(rho_range.lo, best->rho - drho),
                            std::min(rho_range.hi, best->rho + drho)};
  scan(p, b_window, rho_window, db > 0 ? grid.refine_points : 1,
       drho > 0 ? grid.refine_points : 1, opts, best);
  return best->cert;
}

}  // namespace bloch
