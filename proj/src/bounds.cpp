#include "bloch/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bloch {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("gamma must be > 1");
}

void require_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("sigma must lie in (0, 1)");
}

void require_wu(int m, double K) {
  if (m < 1) throw DomainError("dimension m must be >= 1");
  if (!(K >= 1.0) || !std::isfinite(K)) throw DomainError("K must be >= 1");
}

double sigma_factor_wu(int m, double sigma) {
  return sigma * (1.0 - sigma) / ((2.0 - sigma) * std::ldexp(1.0, m));
}

}  // namespace

double beta_lower_E(double gamma) {
  require_gamma(gamma);
  const double d = gamma - 1.0;
  const double e1 = 1.0 / d;
  const double e2 = 1.0 / (d * (gamma + 1.0));
  const double e3 = 1.0 / (d * (gamma * gamma + gamma + 1.0));
  return std::exp(-e1 + e2 / 2.0 - e3 / 3.0);
}

double product_radius(double gamma, double tol) {
  require_gamma(gamma);
  if (!(tol > 0.0)) throw DomainError("product_radius: tol must be positive");
  constexpr long kMaxTerms = 10'000'000;
  double log_product = 0.0;
  double term = 1.0 / gamma;
  for (long j = 1; j <= kMaxTerms && term >= tol; ++j) {
    log_product += std::log1p(term);
    term /= gamma;
  }
  return std::exp(-log_product);
}

double bloch_bound_v1(double gamma, double sigma) {
  return bloch_bound_v2(gamma, sigma) / gamma;
}

double bloch_bound_v2(double gamma, double sigma) {
  require_gamma(gamma);
  require_sigma(sigma);
  return ((sigma + 1.0) / 2.0) * ((1.0 - sigma) / (1.0 - sigma + gamma)) * beta_lower_E(gamma);
}

Optimum2d optimize_2d(const std::function<double(double, double)>& f, const Box2& box,
                      const Optimize2dOptions& opts) {
  if (!(box.x_lo <= box.x_hi && box.y_lo <= box.y_hi))
    throw DomainError("optimize_2d: empty box");
  if (opts.coarse_points < 2 || opts.refine_factor < 2 || opts.refine_rounds < 0)
    throw DomainError("optimize_2d: invalid grid options");

  Optimum2d best;
  auto consider = [&](double x, double y) {
    const double v = f(x, y);
    ++best.evaluations;
    if (std::isnan(v)) return v;
    const bool improves = v > best.value ||
                          (v == best.value && (x < best.x || (x == best.x && y < best.y)));
    if (improves) {
      best.x = x;
      best.y = y;
      best.value = v;
    }
    return v;
  };

  const int n = opts.coarse_points;
  double dx = (box.x_hi - box.x_lo) / (n - 1);
  double dy = (box.y_hi - box.y_lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = i == n - 1 ? box.x_hi : box.x_lo + dx * i;
    for (int j = 0; j < n; ++j) {
      const double y = j == n - 1 ? box.y_hi : box.y_lo + dy * j;
      const double v = consider(x, y);
      if (opts.on_coarse_point) opts.on_coarse_point(x, y, v);
    }
  }

  const int k = opts.refine_factor;
  for (int round = 0; round < opts.refine_rounds; ++round) {
    if (!std::isfinite(best.value)) break;
    const double cx = best.x;
    const double cy = best.y;
    const double sx = dx / k;
    const double sy = dy / k;
    for (int i = -k; i <= k; ++i) {
      const double x = cx + sx * i;
      if (x < box.x_lo || x > box.x_hi) continue;
      for (int j = -k; j <= k; ++j) {
        const double y = cy + sy * j;
        if (y < box.y_lo || y > box.y_hi) continue;
        consider(x, y);
      }
    }
    dx = sx;
    dy = sy;
  }
  return best;
}

Box2 default_bound_box() { return Box2{1.0 + 1e-6, 50.0, 1e-6, 1.0 - 1e-6}; }

BoundParams optimize_bound(double (*bound)(double, double), const Optimize2dOptions& opts) {
  const auto opt = optimize_2d(bound, default_bound_box(), opts);
  return BoundParams{opt.x, opt.y, opt.value};
}

double a3_cap(double r, double a2) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("a3_cap: r must lie in (0, 1)");
  if (!(a2 >= 0.0 && a2 <= 1.0)) throw DomainError("a3_cap: a2 must lie in [0, 1]");
  const double r2 = r * r;
  const double growth = (2.0 - r2) / ((1.0 - r2) * (1.0 - r2));
  return std::sqrt(std::max(growth - a2 * a2 * r2, 0.0)) / r2;
}

double eh_penalty(double rho, double r, double a2, double a3) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("eh_penalty: r must lie in (0, 1)");
  if (!(rho > 0.0)) throw DomainError("eh_penalty: rho must be positive");
  if (!(rho < r)) throw DomainError("eh_penalty: rho must be < r (tail series diverges)");
  if (!(a2 >= 0.0 && a2 <= 1.0)) throw DomainError("eh_penalty: a2 must lie in [0, 1]");
  const double cap = a3_cap(r, a2);
  if (!(a3 >= 0.0) || a3 > cap * (1.0 + 1e-12))
    throw DomainError("eh_penalty: a3 outside [0, a3_cap(r, a2)]");

  const double r2 = r * r;
  const double growth = (2.0 - r2) / ((1.0 - r2) * (1.0 - r2));
  const double radicand = std::max(growth - a2 * a2 * r2 - a3 * a3 * r2 * r2, 0.0);
  const double t = rho / r;
  const double tail = (r2 / 5.0) * std::sqrt(radicand) * std::pow(t, 5) / (1.0 - t);
  return (a2 / 3.0) * std::pow(rho, 3) + (a3 / 4.0) * std::pow(rho, 4) + tail;
}

EHParams eh_bound(double rho, double r, const EHOptions& opts) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("eh_bound: r must lie in (0, 1)");
  if (!(rho > 0.0 && rho < r)) throw DomainError("eh_bound: need 0 < rho < r");

  auto objective = [&](double a2, double a3) {
    if (a3 > a3_cap(r, a2)) return std::numeric_limits<double>::quiet_NaN();
    return eh_penalty(rho, r, a2, a3);
  };
  Optimize2dOptions grid;
  grid.coarse_points = opts.coarse_points;
  grid.refine_rounds = opts.refine_rounds;
  grid.on_coarse_point = opts.on_coarse_point;
  const auto opt = optimize_2d(objective, Box2{0.0, 1.0, 0.0, a3_cap(r, 0.0)}, grid);
  return EHParams{rho, r, opt.x, opt.y, rho - opt.value};
}

double wu_bound(int m, double K, double gamma, double sigma) {
  require_wu(m, K);
  require_gamma(gamma);
  require_sigma(sigma);
  return sigma_factor_wu(m, sigma) * std::pow(K, -(3.0 * m - 1.0) / 2.0) *
         beta_lower_E(gamma) / gamma;
}

std::pair<double, double> wu_branch_bounds(int m, double K, double gamma, double sigma,
                                           double det_modulus) {
  require_wu(m, K);
  require_gamma(gamma);
  require_sigma(sigma);
  if (!(det_modulus >= 1.0) || !std::isfinite(det_modulus))
    throw DomainError("wu_branch_bounds: |det F'(beta)| must be >= 1");
  const double s = sigma_factor_wu(m, sigma);
  const double root = std::pow(det_modulus, 1.0 / m);
  const double e = beta_lower_E(gamma);
  const double first = s * root / (std::pow(K, 2.0 * m - 1.0) * gamma * gamma) * e;
  const double second = s / (std::pow(K, static_cast<double>(m)) * root) * e;
  return {first, second};
}

BoundParams theorem_bound_mv(int m, double K, bool ball_domain, const Optimize2dOptions& opts) {
  require_wu(m, K);
  const auto opt = optimize_2d([&](double g, double s) { return wu_bound(m, K, g, s); },
                               default_bound_box(), opts);
  const double scale = ball_domain ? 1.0 / std::sqrt(static_cast<double>(m)) : 1.0;
  return BoundParams{opt.x, opt.y, opt.value * scale};
}

}  // namespace bloch
