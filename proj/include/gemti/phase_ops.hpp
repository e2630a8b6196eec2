#ifndef GEMTI_PHASE_OPS_HPP
#define GEMTI_PHASE_OPS_HPP

#include <cmath>

#include "gemti/envelope.hpp"

namespace gemti {

// Time lens: A(t) -> A(t) exp[i omega0 t^2 / (2 f_t)]. f_t in us
// (seconds_to_us converts the paper-style value). |A| is unchanged; the
// Wigner map shears as omega' = omega - omega0 t / f_t.
inline Envelope apply_time_lens(const Envelope& env, double f_t_us) {
  if (f_t_us == 0.0) throw ZeroFocalError("apply_time_lens: zero focal time");
  if (std::isinf(f_t_us)) return env;
  const double w0 = rad_s_to_rad_us(env.omega0);   // rad/us
  const double k = w0 / (2.0 * f_t_us);            // rad/us^2
  Envelope out = env;
  for (int i = 0; i < out.grid.n; ++i) {
    const double t = out.grid.t(i);
    out.samples[i] *= std::exp(cplx(0.0, k * t * t));
  }
  return out;
}

// Temporal free-space propagation: A~(omega) -> A~(omega) exp[-i f_t omega^2/(2 omega0)].
// The half factor makes lens-prop-lens close exactly onto the pi/2 rotation
// of the ray-matrix identity; the corresponding Wigner shift is
// t' = t + f_t omega / omega0.
inline Envelope apply_temporal_propagation(const Envelope& env, double f_t_us) {
  const double w0 = rad_s_to_rad_us(env.omega0);
  const double k = f_t_us / (2.0 * w0);            // us^2 per rad... times omega^2
  Spectrum sp = to_spectrum(env);
  for (int m = 0; m < sp.n(); ++m) {
    const double w = sp.omega(m);
    sp.samples[m] *= std::exp(cplx(0.0, -k * w * w));
  }
  return to_envelope(sp);
}

}  // namespace gemti

#endif
