#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace bloch {

namespace detail {

inline double sort_key(const Complex& z) { return z.real(); }

template <typename Derived>
double sort_key(const Eigen::MatrixBase<Derived>& v) {
  return v(0).real();
}

}  // namespace detail

template <typename Point>
long count_injectivity_collisions(const std::vector<Point>& targets,
                                  const std::vector<Point>& solutions, double target_sep,
                                  double solution_sep) {
  if (targets.size() != solutions.size())
    throw DomainError("count_injectivity_collisions: size mismatch");
  std::vector<std::size_t> order(solutions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = detail::sort_key(solutions[a]);
    const double kb = detail::sort_key(solutions[b]);
    return ka < kb || (ka == kb && a < b);
  });

  // Sweep: only solutions whose first real coordinate lies within
  // solution_sep can be closer than solution_sep.
  long collisions = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& zi = solutions[order[i]];
    const double ki = detail::sort_key(zi);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& zj = solutions[order[j]];
      if (detail::sort_key(zj) - ki >= solution_sep) break;
      if (detail::distance(zi, zj) < solution_sep &&
          detail::distance(targets[order[i]], targets[order[j]]) >= target_sep)
        ++collisions;
    }
  }
  return collisions;
}

}  // namespace bloch
