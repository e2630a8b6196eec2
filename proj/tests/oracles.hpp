#ifndef GEMTI_TEST_ORACLES_HPP
#define GEMTI_TEST_ORACLES_HPP

// Brute-force reference computations for the test suites. Everything here is
// deliberately independent of the library's FFT / solver code paths.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "gemti/envelope.hpp"

namespace oracles {

using gemti::cplx;
using gemti::Envelope;

// A~(omega) by direct evaluation of the transform definition
inline cplx brute_spectrum(const Envelope& env, double omega) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < env.grid.n; ++i)
    acc += env.samples[i] * std::exp(cplx(0.0, -omega * env.grid.t(i)));
  return acc * env.grid.dt / std::sqrt(gemti::two_pi);
}

// least-squares slope of the unwrapped phase over [t_lo, t_hi]
inline double phase_slope(const Envelope& env, double t_lo, double t_hi) {
  std::vector<double> ts, ph;
  double prev = 0.0, offset = 0.0;
  bool first = true;
  for (int i = 0; i < env.grid.n; ++i) {
    const double t = env.grid.t(i);
    if (t < t_lo || t > t_hi) continue;
    double p = std::arg(env.samples[i]);
    if (!first) {
      while (p + offset - prev > gemti::pi) offset -= gemti::two_pi;
      while (p + offset - prev < -gemti::pi) offset += gemti::two_pi;
    }
    p += offset;
    prev = p;
    first = false;
    ts.push_back(t);
    ph.push_back(p);
  }
  // d(phase)/dt at the center equals the chirp slope times t; fit phase to
  // a quadratic and report the curvature (slope of instantaneous frequency)
  // via two half-interval linear fits.
  const std::size_t n = ts.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, sxxx = 0, sxxxx = 0, sxxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ts[i], y = ph[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    sxxx += x * x * x;
    sxxxx += x * x * x * x;
    sxxy += x * x * y;
  }
  // normal equations for y = a + b x + c x^2; chirp slope = 2c
  const double nn = static_cast<double>(n);
  double m[3][4] = {{nn, sx, sxx, sy},
                    {sx, sxx, sxxx, sxy},
                    {sxx, sxxx, sxxxx, sxxy}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  const double c = m[2][3] / m[2][2];
  return 2.0 * c;
}

// intensity-weighted temporal centroid
inline double centroid(const Envelope& env) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < env.grid.n; ++i) {
    const double w = std::norm(env.samples[i]);
    num += w * env.grid.t(i);
    den += w;
  }
  return num / den;
}

// trapezoid quadrature of samples on a uniform lattice
inline double trapezoid(const std::vector<double>& y, double dx) {
  double s = 0.0;
  for (std::size_t i = 1; i < y.size(); ++i) s += 0.5 * (y[i] + y[i - 1]);
  return s * dx;
}

}  // namespace oracles

#endif
