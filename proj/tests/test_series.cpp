#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bloch/series.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace bloch;
using testutil::make_poly;

namespace {

std::vector<Complex> to_vector(const Poly& p) {
  std::vector<Complex> v;
  for (Eigen::Index k = 0; k < p.size(); ++k) v.push_back(p.coeffs()(k));
  return v;
}

}  // namespace

TEST_CASE("polynomial construction") {
  SUBCASE("trailing zeros are trimmed") {
    const Poly p = make_poly({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
  }
  SUBCASE("zero polynomial is representable") {
    const Poly z = make_poly({0.0, 0.0});
    CHECK(z.is_zero());
    CHECK(z.degree() == 0);
    CHECK(Poly().is_zero());
  }
  SUBCASE("non-finite input is rejected") {
    CHECK_THROWS_AS(make_poly({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
    CHECK_THROWS_AS(make_poly({1.0}, Complex(std::numeric_limits<double>::infinity(), 0.0)),
                    DomainError);
  }
  SUBCASE("evaluation at the center returns the constant term exactly") {
    const Poly p = make_poly({Complex(0.3, -0.7), 2.0, 5.0}, Complex(0.1, 0.2));
    CHECK(eval(p, Complex(0.1, 0.2)) == Complex(0.3, -0.7));
  }
}

TEST_CASE("eval") {
  CHECK(eval(Poly::identity(), Complex(0.5)) == Complex(0.5));

  // r - r^3/3 - (4.66922/4) r^4 at its maximizer.
  const Complex v = eval(testutil::quartic(4.66922), Complex(0.534759));
  CHECK(std::abs(v.real() - 0.38832) < 1e-5);
  CHECK(std::abs(v.real() - 0.388321) < 1e-5);
  CHECK(v.imag() == 0.0);

  SUBCASE("matches term-by-term summation on random degree <= 16 polynomials") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> deg(0, 16);
    for (int trial = 0; trial < 200; ++trial) {
      const auto c = testutil::random_coeffs(rng, trial == 0 ? 8 : deg(rng));
      const Complex center = oracle::random_in_disk(rng, 0.5);
      const Complex z = oracle::random_in_disk(rng, 1.0);
      const Complex expected = oracle::term_sum(c, center, z);
      const Complex got = eval(make_poly(c, center), z);
      double scale = 0.0;
      for (std::size_t k = 0; k < c.size(); ++k)
        scale += std::abs(c[k]) * std::pow(std::abs(z - center), static_cast<double>(k));
      CHECK(std::abs(got - expected) <= 1e-13 * std::max(scale, 1e-300));
    }
  }
}

TEST_CASE("derivative") {
  CHECK(derivative(make_poly({3.0})).is_zero());
  CHECK(derivative(Poly()).is_zero());

  const Poly dq = derivative(testutil::quartic(4.66922));
  const double b = -0.07;
  const double expected = 1.0 - b * b - 4.66922 * b * b * b;  // 0.9967016
  CHECK(std::abs(eval(dq, Complex(b)).real() - expected) < 1e-15);
  CHECK(std::abs(expected - 0.9967016) < 1e-7);

  SUBCASE("commutes with taylor_shift") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const Poly p = make_poly(testutil::random_coeffs(rng, 7));
      const Complex s = oracle::random_in_disk(rng, 0.8);
      const Poly a = derivative(taylor_shift(p, s));
      const Poly c = taylor_shift(derivative(p), s);
      REQUIRE(a.size() == c.size());
      CHECK(a.center() == c.center());
      for (Eigen::Index k = 0; k < a.size(); ++k)
        CHECK(std::abs(a.coeffs()(k) - c.coeffs()(k)) < 1e-12);
    }
  }
}

TEST_CASE("taylor_shift") {
  SUBCASE("binomial expansion of z^3 about 1") {
    const Poly q = taylor_shift(make_poly({0.0, 0.0, 0.0, 1.0}), Complex(1.0));
    CHECK(q.center() == Complex(1.0));
    const std::vector<double> expected{1.0, 3.0, 3.0, 1.0};
    REQUIRE(q.size() == 4);
    for (int k = 0; k < 4; ++k) CHECK(q.coeffs()(k) == Complex(expected[static_cast<std::size_t>(k)]));
  }

  SUBCASE("quartic about b = -0.07 matches closed-form derivatives") {
    const double A = 4.66922;
    const double b = -0.07;
    const Poly q = taylor_shift(testutil::quartic(A), Complex(b));
    // f = z - z^3/3 - (A/4) z^4 differentiated by hand.
    const double f0 = b - b * b * b / 3.0 - A / 4.0 * b * b * b * b;
    const double f1 = 1.0 - b * b - A * b * b * b;
    const double f2 = (-2.0 * b - 3.0 * A * b * b) / 2.0;
    const double f3 = (-2.0 - 6.0 * A * b) / 6.0;
    const double f4 = -A / 4.0;
    const std::vector<double> expected{f0, f1, f2, f3, f4};
    for (int k = 0; k < 5; ++k)
      CHECK(std::abs(q.coeffs()(k) - expected[static_cast<std::size_t>(k)]) < 1e-15);
    CHECK(std::abs(q.coeff(1).real() - 0.9967016) < 1e-7);
    CHECK(std::abs(q.coeff(4).real() - -1.167305) < 1e-7);
  }

  SUBCASE("round trip back to the origin") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const auto c = testutil::random_coeffs(rng, 9);
      const Poly p = make_poly(c);
      const Poly back = taylor_shift(taylor_shift(p, oracle::random_in_disk(rng, 0.9)), Complex(0.0));
      CHECK(back.center() == Complex(0.0));
      for (std::size_t k = 0; k < c.size(); ++k)
        CHECK(std::abs(back.coeff(static_cast<Eigen::Index>(k)) - c[k]) < 1e-12);
    }
  }

  SUBCASE("shift preserves values") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const Poly p = make_poly(testutil::random_coeffs(rng, 10), oracle::random_in_disk(rng, 0.3));
      const Complex b = oracle::random_in_disk(rng, 0.9);
      const Complex z = oracle::random_in_disk(rng, 1.0);
      const Complex v = eval(p, z);
      CHECK(std::abs(v - eval(taylor_shift(p, b), z)) <= 1e-11 * (1.0 + std::abs(v)));
    }
  }

  SUBCASE("coefficients equal derivatives over factorials") {
    std::mt19937_64 rng(13);
    const auto c = testutil::random_coeffs(rng, 6);
    const Complex b(0.2, -0.4);
    const Poly q = taylor_shift(make_poly(c), b);
    double factorial = 1.0;
    for (int k = 0; k <= 6; ++k) {
      if (k > 0) factorial *= k;
      CHECK(std::abs(q.coeff(k) - oracle::derivative_at(c, k, b) / factorial) < 1e-12);
    }
  }

  CHECK(taylor_shift(Poly(), Complex(0.5)).is_zero());
  CHECK_THROWS_AS(taylor_shift(Poly::identity(), Complex(std::nan(""), 0.0)), DomainError);
}

TEST_CASE("max_modulus_circle") {
  CHECK(max_modulus_circle(Poly::identity(), Complex(0.0), 0.7) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(max_modulus_circle(Poly(), Complex(0.3), 0.7) == 0.0);
  CHECK_THROWS_AS(max_modulus_circle(Poly::identity(), Complex(0.0), 0.0), DomainError);
  CHECK_THROWS_AS(max_modulus_circle(Poly::identity(), Complex(0.0), -1.0), DomainError);

  SUBCASE("quartic remainder about -0.07 on radius 0.59") {
    const Poly q = taylor_shift(testutil::quartic(4.66922), Complex(-0.07));
    const double m = max_modulus_circle(nonlinear_part(q), Complex(-0.07), 0.59);
    const auto c = to_vector(taylor_shift(nonlinear_part(q), Complex(0.0)));
    CHECK(std::abs(m - oracle::sampled_max_modulus(c, Complex(-0.07), 0.59, 2'000'000)) < 1e-6);
    // The same remainder with the printed expansion signs gives the 0.43806 disk.
    const Poly qp = taylor_shift(testutil::quartic_plus(4.66922), Complex(-0.07));
    const double mp = max_modulus_circle(nonlinear_part(qp), Complex(-0.07), 0.59);
    CHECK(std::abs(m - 0.1539) < 1e-4);
    CHECK(std::abs(mp - 0.1539) < 1e-4);
    CHECK(std::abs(std::abs(qp.coeff(1)) * 0.59 - mp - 0.43806) < 5e-5);
  }

  SUBCASE("agrees with dense sampling and respects the triangle bound") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 5; ++trial) {
      const auto c = testutil::random_coeffs(rng, 3 + trial);
      const Poly p = make_poly(c);
      const Complex center = oracle::random_in_disk(rng, 0.5);
      const double rho = 0.2 + 0.15 * trial;
      const double m = max_modulus_circle(p, center, rho);
      CHECK(std::abs(m - oracle::sampled_max_modulus(c, center, rho, 2'000'000)) < 1e-6);
      CHECK(m <= triangle_bound(p, center, rho));
      CHECK(m >= std::abs(eval(p, center + Complex(rho, 0.0))));
    }
  }

  SUBCASE("equals the triangle bound for nonnegative real coefficients") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Complex> c;
      for (int k = 0; k <= 6; ++k) c.push_back(Complex(u(rng)));
      const Poly p = make_poly(c);
      const double rho = 0.1 + u(rng);
      const double bound = triangle_bound(p, Complex(0.0), rho);
      const double m = max_modulus_circle(p, Complex(0.0), rho);
      CHECK(m <= bound);
      CHECK(m == doctest::Approx(bound).epsilon(1e-14));
    }
  }
}

TEST_CASE("cauchy_derivative_bound") {
  CHECK(cauchy_derivative_bound(1.0, 1.0, 3) == 2.0);
  CHECK(cauchy_derivative_bound(2.0, 0.5, 2) == 4.0);
  CHECK(cauchy_derivative_bound(2.0, 0.5, 1) == 2.0);
  CHECK_THROWS_AS(cauchy_derivative_bound(1.0, 0.0, 2), DomainError);
  CHECK_THROWS_AS(cauchy_derivative_bound(1.0, -1.0, 2), DomainError);
  CHECK_THROWS_AS(cauchy_derivative_bound(1.0, 1.0, 0), DomainError);

  SUBCASE("z^5 on the unit circle dominates derivatives at |beta| = 0.5") {
    const std::vector<Complex> c{0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    const Poly p = make_poly(c);
    const double M = max_modulus_circle(derivative(p), Complex(0.0), 1.0);
    CHECK(M == doctest::Approx(5.0));
    for (int i = 0; i < 64; ++i) {
      const Complex beta = std::polar(0.5, 2.0 * std::numbers::pi * i / 64.0);
      for (int k = 1; k <= 6; ++k)
        CHECK(std::abs(oracle::derivative_at(c, k, beta)) <= cauchy_derivative_bound(M, 0.5, k) + 1e-12);
    }
  }

  SUBCASE("random polynomials: bound from max |p'| on a surrounding circle") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = testutil::random_coeffs(rng, 2 + trial % 9);
      const Poly p = make_poly(c);
      const Complex beta = oracle::random_in_disk(rng, 0.5);
      const double d = 0.05 + 0.4 * u(rng);
      // M = max |p'| on |z - beta| = d; Cauchy applies to p' = sum over the disk.
      const double M = max_modulus_circle(derivative(p), beta, d);
      for (int k = 1; k <= 10; ++k)
        CHECK(std::abs(oracle::derivative_at(c, k, beta)) <=
              cauchy_derivative_bound(M, d, k) * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("contraction lemma on random polynomials") {
  // If max |g'| <= 1 - sigma on a disk then g is (1 - sigma)-Lipschitz there.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto c = testutil::random_coeffs(rng, 2 + trial % 6, 0.6);
    const Poly g = make_poly(c);
    const Complex center = oracle::random_in_disk(rng, 0.5);
    const double radius = 0.05 + 0.5 * u(rng);
    const double lip = max_modulus_circle(derivative(g), center, radius);
    if (!(lip < 1.0)) continue;
    ++checked;
    for (int pair = 0; pair < 20; ++pair) {
      const Complex z1 = center + oracle::random_in_disk(rng, radius);
      const Complex z2 = center + oracle::random_in_disk(rng, radius);
      CHECK(std::abs(eval(g, z2) - eval(g, z1)) <= lip * std::abs(z2 - z1) + 1e-12);
    }
  }
  CHECK(checked > 50);
}
