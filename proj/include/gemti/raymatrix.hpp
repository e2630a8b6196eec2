#ifndef GEMTI_RAYMATRIX_HPP
#define GEMTI_RAYMATRIX_HPP

#include <array>
#include <cmath>
#include <span>

#include "gemti/errors.hpp"

namespace gemti {

// 2x2 real ray-transfer matrix acting on the column (t, omega/omega0):
// b carries time units, c inverse-time units, a and d are dimensionless.
struct RayMatrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }

  RayMatrix operator*(const RayMatrix& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d,
            c * o.a + d * o.c, c * o.b + d * o.d};
  }

  std::array<double, 2> apply(double t, double omega_over_omega0) const {
    return {a * t + b * omega_over_omega0, c * t + d * omega_over_omega0};
  }

  static RayMatrix identity() { return {}; }
};

// Time lens of focal time f_t: [[1,0],[-1/f_t,1]]. f_t = inf is a flat lens.
inline RayMatrix lens_matrix(double f_t) {
  if (f_t == 0.0) throw ZeroFocalError("lens_matrix: zero focal time");
  if (std::isinf(f_t)) return RayMatrix::identity();
  return {1.0, 0.0, -1.0 / f_t, 1.0};
}

// Temporal free-space propagation over f_t: [[1,f_t],[0,1]].
inline RayMatrix propagation_matrix(double f_t) { return {1.0, f_t, 0.0, 1.0}; }

// Right-to-left product: the last listed matrix acts first on the input.
inline RayMatrix compose(std::span<const RayMatrix> ms) {
  if (ms.empty()) throw EmptyListError("compose: empty matrix list");
  RayMatrix m = ms[0];
  for (std::size_t i = 1; i < ms.size(); ++i) m = m * ms[i];
  return m;
}

inline RayMatrix compose(std::initializer_list<RayMatrix> ms) {
  return compose(std::span<const RayMatrix>(ms.begin(), ms.size()));
}

}  // namespace gemti

#endif
