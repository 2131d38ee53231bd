#pragma once

#include <random>
#include <string>
#include <vector>

#include "bloch/series.hpp"
#include "oracles.hpp"

namespace testutil {

using bloch::Complex;
using bloch::Poly;

inline Poly make_poly(const std::vector<Complex>& c, Complex center = Complex(0.0)) {
  Poly::CoeffVector v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) v(static_cast<Eigen::Index>(k)) = c[k];
  return Poly(std::move(v), center);
}

/// Coefficients uniform in the unit disk (the unit bidisk in re/im).
inline std::vector<Complex> random_coeffs(std::mt19937_64& rng, int degree, double radius = 1.0) {
  std::vector<Complex> c;
  for (int k = 0; k <= degree; ++k) c.push_back(oracle::random_in_disk(rng, radius));
  return c;
}

/// z + sum_{k=2}^{degree} c_k z^k with |c_k| <= scale / k.
inline std::vector<Complex> random_normalized(std::mt19937_64& rng, int degree, double scale) {
  std::vector<Complex> c{Complex(0.0), Complex(1.0)};
  for (int k = 2; k <= degree; ++k) c.push_back(oracle::random_in_disk(rng, scale / k));
  return c;
}

/// z - z^3/3 - (A/4) z^4.
inline Poly quartic(double A) {
  return make_poly({0.0, 1.0, 0.0, -1.0 / 3.0, -A / 4.0});
}

/// z + z^3/3 + (A/4) z^4.
inline Poly quartic_plus(double A) {
  return make_poly({0.0, 1.0, 0.0, 1.0 / 3.0, A / 4.0});
}

inline std::string data_path(const std::string& name) { return std::string(BLOCH_DATA_DIR) + "/" + name; }

}  // namespace testutil
