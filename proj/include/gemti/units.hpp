#ifndef GEMTI_UNITS_HPP
#define GEMTI_UNITS_HPP

#include <numbers>

// Internal unit system: time in us, angular frequency in rad/us, length in cm,
// gradients in rad/us/cm, chirps in rad/us^2. The optical carrier omega0 is
// kept in rad/s and only ever used in the ratios omega0/alpha and f_t/omega0.

namespace gemti {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ordinary frequency in MHz -> angular frequency in rad/us
inline constexpr double mhz(double f) { return two_pi * f; }

// seconds <-> internal microseconds
inline constexpr double seconds_to_us(double s) { return s * 1e6; }
inline constexpr double us_to_seconds(double us) { return us * 1e-6; }

// rad/s <-> rad/us
inline constexpr double rad_s_to_rad_us(double w) { return w * 1e-6; }

// wavelength (nm) -> optical angular frequency (rad/s)
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double omega0_from_wavelength_nm(double lambda_nm) {
  return two_pi * speed_of_light_m_s / (lambda_nm * 1e-9);
}

// Zeeman gradient conversion helper: the coil geometry gives G/cm, the solver
// wants rad/us/cm. For the 5S1/2 F=2, m_F=2 state (g_F = 1/2, m = 2) the shift
// is mu_B * g_F * m * B = 1.3996 MHz/G * B.
inline constexpr double mu_b_mhz_per_gauss = 1.3996245;
inline constexpr double zeeman_gradient_from_g_per_cm(double g_per_cm,
                                                      double g_f = 0.5,
                                                      double m_f = 2.0) {
  return mhz(mu_b_mhz_per_gauss * g_f * m_f * g_per_cm);
}

}  // namespace gemti

#endif
