#ifndef GEMTI_WIGNER_HPP
#define GEMTI_WIGNER_HPP

#include <cmath>
#include <vector>

#include "gemti/envelope.hpp"

namespace gemti {

// Chronocyclic Wigner map W(t, omega) sampled on (t_axis x omega lattice),
// row-major in t. Marginals integrate to `normalization` times |A(t)|^2 and
// |A~(omega)|^2 respectively (normalization = sqrt(2*pi) for the repo-wide
// transform convention).
struct WignerMap {
  TimeGrid t_axis;
  double omega_min = 0.0;
  double domega = 0.0;
  int n_omega = 0;
  std::vector<double> values;
  double normalization = std::sqrt(two_pi);

  double omega(int k) const { return omega_min + k * domega; }
  double at(int it, int iw) const { return values[static_cast<std::size_t>(it) * n_omega + iw]; }

  // marginal over omega -> vector on t_axis
  std::vector<double> time_marginal() const {
    std::vector<double> m(t_axis.n, 0.0);
    for (int it = 0; it < t_axis.n; ++it) {
      double s = 0.0;
      for (int iw = 0; iw < n_omega; ++iw) s += at(it, iw);
      m[it] = s * domega;
    }
    return m;
  }

  // marginal over t -> vector on the omega lattice
  std::vector<double> frequency_marginal() const {
    std::vector<double> m(n_omega, 0.0);
    for (int it = 0; it < t_axis.n; ++it)
      for (int iw = 0; iw < n_omega; ++iw) m[iw] += at(it, iw);
    for (auto& v : m) v *= t_axis.dt;
    return m;
  }
};

// 2x spectral zero-padding: band-limited interpolation onto a dt/2 grid.
inline Envelope oversample2(const Envelope& env) {
  const Spectrum sp = to_spectrum(env);
  const int n = sp.n();
  const int n2 = 2 * n;
  Spectrum sp2;
  sp2.samples.assign(n2, cplx(0.0, 0.0));
  const int c = fftshift_center(n);
  const int c2 = fftshift_center(n2);
  for (int m = 0; m < n; ++m) sp2.samples[m - c + c2] = sp.samples[m];
  sp2.omega_min = -c2 * sp.domega;
  sp2.domega = sp.domega;
  sp2.t0 = sp.t0;
  sp2.dt = sp.dt / 2.0;
  sp2.omega0 = sp.omega0;
  return to_envelope(sp2);
}

// W(t,omega) = (1/sqrt(2pi)) int dxi A(t+xi/2) A*(t-xi/2) exp(-i omega xi),
// evaluated with the product on a twice-oversampled grid and a 2x zero-padded
// DFT in xi. Requires the envelope to vanish at the grid edges.
inline WignerMap wigner(const Envelope& env, double edge_tolerance = 1e-6) {
  const int n = env.grid.n;
  const double peak = env.peak_abs();
  if (peak <= 0.0) throw InvalidParamsError("wigner: empty envelope");
  if (std::abs(env.samples.front()) > edge_tolerance * peak ||
      std::abs(env.samples.back()) > edge_tolerance * peak)
    throw EdgeLeakError("wigner: envelope does not decay at grid boundaries");

  const Envelope a2 = oversample2(env);
  const int n2 = a2.grid.n;  // 2n samples at dt/2
  const int nfft = 4 * n;    // xi support 2n, zero-padded 2x
  const double dt = env.grid.dt;

  WignerMap w;
  w.t_axis = env.grid;
  w.n_omega = nfft;
  w.domega = two_pi / (nfft * dt);
  w.omega_min = -fftshift_center(nfft) * w.domega;
  w.values.assign(static_cast<std::size_t>(n) * nfft, 0.0);

  Eigen::FFT<double> fft;
  std::vector<cplx> h(nfft), out(nfft);
  const double scale = dt / std::sqrt(two_pi);
  for (int j = 0; j < n; ++j) {
    std::fill(h.begin(), h.end(), cplx(0.0, 0.0));
    const int j2 = 2 * j;
    const int mmax = std::min(j2, n2 - 1 - j2);
    for (int m = -mmax; m <= mmax; ++m) {
      const cplx g = a2.samples[j2 + m] * std::conj(a2.samples[j2 - m]);
      h[(m + nfft) % nfft] = g;
    }
    fft.fwd(out, h);
    const std::vector<cplx> shifted = fftshift(out);
    for (int k = 0; k < nfft; ++k)
      w.values[static_cast<std::size_t>(j) * nfft + k] = scale * shifted[k].real();
  }
  return w;
}

}  // namespace gemti

#endif
