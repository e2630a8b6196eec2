#ifndef GEMTI_ENVELOPE_HPP
#define GEMTI_ENVELOPE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gemti/fourier.hpp"
#include "gemti/grid.hpp"
#include "gemti/units.hpp"

namespace gemti {

// Slowly varying amplitude A(t) on a uniform grid, in sqrt(photons)/sqrt(us).
// omega0 is the optical carrier in rad/s.
struct Envelope {
  TimeGrid grid;
  std::vector<cplx> samples;
  double omega0 = omega0_from_wavelength_nm(795.0);

  Envelope() = default;
  Envelope(TimeGrid g, std::vector<cplx> s, double w0 = omega0_from_wavelength_nm(795.0))
      : grid(g), samples(std::move(s)), omega0(w0) {
    if (static_cast<int>(samples.size()) != grid.n)
      throw InvalidParamsError("Envelope: sample count does not match grid");
    if (!(omega0 > 0.0)) throw InvalidParamsError("Envelope: omega0 must be positive");
  }

  // integral |A|^2 dt (photons)
  double energy() const {
    double e = 0.0;
    for (const auto& a : samples) e += std::norm(a);
    return e * grid.dt;
  }

  double peak_abs() const {
    double m = 0.0;
    for (const auto& a : samples) m = std::max(m, std::abs(a));
    return m;
  }

  // linear interpolation in t, zero outside the grid
  cplx sample_at(double t) const {
    const double x = (t - grid.t0) / grid.dt;
    if (x < 0.0 || x > grid.n - 1) return {0.0, 0.0};
    const int i = std::min(static_cast<int>(x), grid.n - 2);
    const double f = x - i;
    return samples[i] * (1.0 - f) + samples[i + 1] * f;
  }
};

// Spectral amplitude on the conjugate lattice, ascending omega (rad/us,
// relative to the carrier). Keeps the source time grid so the transform
// round-trips exactly.
struct Spectrum {
  std::vector<cplx> samples;
  double omega_min = 0.0;
  double domega = 0.0;
  double t0 = 0.0;   // source grid origin
  double dt = 0.0;   // source grid step
  double omega0 = 0.0;

  int n() const { return static_cast<int>(samples.size()); }
  double omega(int k) const { return omega_min + k * domega; }

  double energy() const {
    double e = 0.0;
    for (const auto& a : samples) e += std::norm(a);
    return e * domega;
  }
};

// A~(omega) = (1/sqrt(2pi)) int A(t) exp(-i omega t) dt, evaluated on the
// DFT lattice and reordered to ascending omega.
inline Spectrum to_spectrum(const Envelope& env) {
  const int n = env.grid.n;
  const double dt = env.grid.dt;
  const double domega = two_pi / (n * dt);
  std::vector<cplx> f = fftshift(dft(env.samples));
  const int c = fftshift_center(n);
  Spectrum sp;
  sp.samples.resize(n);
  sp.omega_min = -c * domega;
  sp.domega = domega;
  sp.t0 = env.grid.t0;
  sp.dt = dt;
  sp.omega0 = env.omega0;
  const double scale = dt / std::sqrt(two_pi);
  for (int m = 0; m < n; ++m) {
    const double w = sp.omega(m);
    sp.samples[m] = f[m] * scale * std::exp(cplx(0.0, -w * env.grid.t0));
  }
  return sp;
}

// Inverse: A(t) = (1/sqrt(2pi)) int A~(omega) exp(+i omega t) domega.
inline Envelope to_envelope(const Spectrum& sp) {
  const int n = sp.n();
  if (!(sp.dt > 0.0))
    throw InvalidParamsError("to_envelope: spectrum lacks source-grid metadata");
  std::vector<cplx> f(n);
  const double scale = std::sqrt(two_pi) / sp.dt;
  for (int m = 0; m < n; ++m) {
    const double w = sp.omega(m);
    f[m] = sp.samples[m] * scale * std::exp(cplx(0.0, w * sp.t0));
  }
  std::vector<cplx> a = idft(ifftshift(f));
  return Envelope(TimeGrid(sp.t0, sp.dt, n), std::move(a), sp.omega0);
}

}  // namespace gemti

#endif
