#ifndef GEMTI_WAVEFORMS_HPP
#define GEMTI_WAVEFORMS_HPP

#include <cmath>

#include "gemti/envelope.hpp"

namespace gemti {
namespace waveforms {

inline Envelope gaussian(const TimeGrid& g, double center, double width,
                         double omega0 = omega0_from_wavelength_nm(795.0)) {
  std::vector<cplx> s(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double x = (g.t(i) - center) / width;
    s[i] = std::exp(-0.5 * x * x);
  }
  return Envelope(g, std::move(s), omega0);
}

inline Envelope two_pulse(const TimeGrid& g, double center, double separation,
                          double width,
                          double omega0 = omega0_from_wavelength_nm(795.0)) {
  std::vector<cplx> s(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double t = g.t(i);
    const double x1 = (t - (center - separation / 2)) / width;
    const double x2 = (t - (center + separation / 2)) / width;
    s[i] = std::exp(-0.5 * x1 * x1) + std::exp(-0.5 * x2 * x2);
  }
  return Envelope(g, std::move(s), omega0);
}

// Gaussian envelope multiplied by cos(2*pi*f*(t-center)); f in MHz = 1/us.
inline Envelope sine(const TimeGrid& g, double center, double envelope_width,
                     double f_mhz,
                     double omega0 = omega0_from_wavelength_nm(795.0)) {
  std::vector<cplx> s(g.n);
  for (int i = 0; i < g.n; ++i) {
    const double t = g.t(i);
    const double x = (t - center) / envelope_width;
    s[i] = std::exp(-0.5 * x * x) * std::cos(two_pi * f_mhz * (t - center));
  }
  return Envelope(g, std::move(s), omega0);
}

// Rescale so that the pulse carries n_bar photons: int |A|^2 dt = n_bar.
inline Envelope with_photon_number(Envelope env, double n_bar) {
  const double e = env.energy();
  if (e <= 0.0) throw InvalidParamsError("with_photon_number: zero-energy envelope");
  const double s = std::sqrt(n_bar / e);
  for (auto& a : env.samples) a *= s;
  return env;
}

}  // namespace waveforms
}  // namespace gemti

#endif
