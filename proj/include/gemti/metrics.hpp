#ifndef GEMTI_METRICS_HPP
#define GEMTI_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gemti/envelope.hpp"
#include "gemti/medium.hpp"

namespace gemti {

// GEM efficiency, Eq.-2 form: [1 - exp(-2 pi OD / (tau B))]^2 with tauB the
// raw product tau*B (B in rad/time, so the 2 pi is explicit).
inline double eta0_uniform(double od, double tauB) {
  if (od < 0.0) throw InvalidParamsError("eta0_uniform: negative OD");
  if (!(tauB > 0.0)) throw InvalidParamsError("eta0_uniform: tauB must be positive");
  const double x = 1.0 - std::exp(-two_pi * od / tauB);
  return x * x;
}

struct EfficiencySpectrum {
  std::vector<double> omega;  // rad/us
  std::vector<double> eta0;   // [0,1]
};

namespace detail {

// half-max crossings from the peak outward, linear interpolation between the
// bracketing samples; exact ties at half max resolve to the outermost sample
inline std::pair<double, double> fwhm_crossings(std::span<const double> xs,
                                                std::span<const double> ys) {
  const std::size_t n = ys.size();
  std::size_t imax = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (ys[i] > ys[imax]) imax = i;
  if (!(ys[imax] > 0.0)) throw NoFwhmError("fwhm: non-positive maximum");
  const double half = ys[imax] / 2.0;

  std::size_t i = imax;
  while (i > 0 && ys[i - 1] > half) --i;
  if (i == 0) throw NoFwhmError("fwhm: no crossing on the left of the peak");
  while (i > 1 && ys[i - 1] == half) --i;  // outermost tie
  const double fl = (ys[i] - half) / (ys[i] - ys[i - 1]);
  const double left = xs[i] - fl * (xs[i] - xs[i - 1]);

  std::size_t j = imax;
  while (j + 1 < n && ys[j + 1] > half) ++j;
  if (j + 1 == n) throw NoFwhmError("fwhm: no crossing on the right of the peak");
  while (j + 2 < n && ys[j + 1] == half) ++j;
  const double fr = (ys[j] - half) / (ys[j] - ys[j + 1]);
  const double right = xs[j] + fr * (xs[j + 1] - xs[j]);
  return {left, right};
}

inline double interp(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  const double f = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] * (1.0 - f) + ys[i] * f;
}

}  // namespace detail

inline double fwhm_of(std::span<const double> xs, std::span<const double> ys) {
  auto [l, r] = detail::fwhm_crossings(xs, ys);
  return r - l;
}

// Time-frequency averaged efficiency: (e^2-1)/(2 e^2 B) * integral of eta0
// over the FWHM band. The time integral of exp(-t/tau) over [0, 2 tau]
// produced the prefactor, so tau itself cancels; it is validated only.
inline double averaged_efficiency(const EfficiencySpectrum& spec, double tau) {
  if (!(tau > 0.0)) throw InvalidParamsError("averaged_efficiency: tau must be positive");
  if (spec.omega.size() != spec.eta0.size() || spec.omega.size() < 3)
    throw InvalidParamsError("averaged_efficiency: bad spectrum");
  auto [l, r] = detail::fwhm_crossings(spec.omega, spec.eta0);
  const double B = r - l;
  const double c = (l + r) / 2.0;
  // trapezoid over [c - B/2, c + B/2] on a fixed fine lattice
  const int m = 4096;
  double sum = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double w = c - B / 2.0 + B * i / m;
    const double v = detail::interp(spec.omega, spec.eta0, w);
    sum += (i == 0 || i == m) ? v / 2.0 : v;
  }
  const double mean = sum / m;
  const double prefactor = (std::exp(2.0) - 1.0) / (2.0 * std::exp(2.0));
  return prefactor * mean;
}

// FWHM/(2 pi) of the supplement's monochromatic-input power spectrum
// (1 + e - 2 sqrt(e) cos(tau w)) / (4 tau^2 w^2 + 1), computed at tau = 1 by
// bisection on the dense analytic form; a pure number, cached.
inline double resolution_prefactor() {
  static const double cached = [] {
    auto f = [](double w) {
      return (1.0 + std::exp(1.0) - 2.0 * std::sqrt(std::exp(1.0)) * std::cos(w)) /
             (4.0 * w * w + 1.0);
    };
    const double half = f(0.0) / 2.0;
    double lo = 0.0, hi = 8.0;
    // the spectrum has cosine ripples; walk to the first descending crossing
    const int m = 200000;
    for (int i = 1; i <= m; ++i) {
      const double w = 8.0 * i / m;
      if (f(w) < half) {
        lo = 8.0 * (i - 1) / m;
        hi = w;
        break;
      }
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = (lo + hi) / 2.0;
      (f(mid) > half ? lo : hi) = mid;
    }
    return 2.0 * (lo + hi) / 2.0 / two_pi;
  }();
  return cached;
}

// Equivalent group-delay dispersion of the SSM phase: 2 pi f_t / omega0,
// reported in us^2 (f_t in seconds, omega0 in rad/s). The 2 pi makes it the
// derivative of group delay with respect to ordinary frequency, matching the
// quoted 25 us^2 at f_t = 9600 s; the plain f_t/omega0 value is 2 pi smaller.
inline double gdd_equivalent(double f_t_seconds, double omega0_rad_s) {
  if (!(omega0_rad_s > 0.0)) throw InvalidParamsError("gdd_equivalent: omega0 must be positive");
  return two_pi * f_t_seconds / omega0_rad_s * 1e12;
}

// ---------------------------------------------------------------------------
// Waveform analysis for Fig-3-style traces: FWHM, refined peak positions,
// fringe period from the dominant nonzero DFT bin, visibility over the
// region above 10% of the global maximum.
// ---------------------------------------------------------------------------
struct WaveformStats {
  double fwhm = 0.0;
  std::vector<double> peak_positions;  // sorted by height, descending
  std::optional<double> fringe_period;
  std::optional<double> visibility;
};

inline WaveformStats analyze_waveform(std::span<const double> t, std::span<const double> v) {
  const std::size_t n = v.size();
  if (t.size() != n || n < 5) throw InvalidParamsError("analyze_waveform: bad input");
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  double baseline = 0.0;
  for (std::size_t i = 0; i < n / 4 + 1; ++i) baseline += sorted[i];
  baseline /= (n / 4 + 1);
  const double vmax = sorted.back();
  if (!(vmax > 3.0 * baseline) || !(vmax > 0.0))
    throw NoPeakError("analyze_waveform: no peak above 3x baseline");

  WaveformStats st;
  st.fwhm = fwhm_of(t, v);

  struct Peak {
    double pos, height;
  };
  std::vector<Peak> peaks;
  const double thresh = std::max(3.0 * baseline, 0.25 * vmax);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (v[i] >= v[i - 1] && v[i] > v[i + 1] && v[i] > thresh) {
      // parabolic refinement of the vertex
      const double a = v[i - 1], b = v[i], c = v[i + 1];
      const double denom = a - 2.0 * b + c;
      double pos = t[i];
      if (denom < 0.0) pos += 0.5 * (a - c) / denom * (t[i + 1] - t[i]);
      peaks.push_back({pos, b});
    }
  }
  if (peaks.empty()) peaks.push_back({t[std::max_element(v.begin(), v.end()) - v.begin()], vmax});
  std::sort(peaks.begin(), peaks.end(),
            [](const Peak& a, const Peak& b) { return a.height > b.height; });
  for (const auto& p : peaks) st.peak_positions.push_back(p.pos);

  // fringe region: contiguous block around the global max above 10% of it
  std::size_t imax = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  std::size_t lo = imax, hi = imax;
  while (lo > 0 && v[lo - 1] > 0.1 * vmax) --lo;
  while (hi + 1 < n && v[hi + 1] > 0.1 * vmax) ++hi;
  if (hi - lo >= 8) {
    const std::size_t m = hi - lo + 1;
    const double dtau = t[1] - t[0];
    double mean = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) mean += v[i];
    mean /= m;
    const std::size_t nfft = 8 * m;  // zero-padded for period refinement
    std::vector<cplx> x(nfft, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < m; ++i) x[i] = v[lo + i] - mean;
    std::vector<cplx> X = dft(x);
    std::size_t kbest = 0;
    double best = 0.0;
    for (std::size_t k = 1; k <= nfft / 2; ++k) {
      const double a = std::abs(X[k]);
      if (a > best) {
        best = a;
        kbest = k;
      }
    }
    if (kbest > 0 && best > 0.0) {
      st.fringe_period = static_cast<double>(nfft) * dtau / static_cast<double>(kbest);
      double vmin = vmax;
      for (std::size_t i = lo; i <= hi; ++i) vmin = std::min(vmin, v[i]);
      st.visibility = (vmax - vmin) / (vmax + vmin);
    }
  }
  return st;
}

struct LinearFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n || n < 2) throw InvalidParamsError("linear_fit: bad input");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  const double d = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / d;
  f.intercept = (sy - f.slope * sx) / n;
  double ssr = 0, sst = 0;
  const double ym = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double fit = f.slope * x[i] + f.intercept;
    ssr += (y[i] - fit) * (y[i] - fit);
    sst += (y[i] - ym) * (y[i] - ym);
  }
  f.r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// Efficiency map over a (control power, gradient) grid, Fig-4(e) style.
// ---------------------------------------------------------------------------
struct EfficiencyMap {
  std::vector<double> rabi;       // rad/us, rows
  std::vector<double> beta;       // rad/us/cm, columns
  std::vector<double> tau;        // us, per row
  std::vector<double> bandwidth;  // rad/us, row-major per cell
  std::vector<double> eta_bar;    // row-major per cell

  int rows() const { return static_cast<int>(rabi.size()); }
  int cols() const { return static_cast<int>(beta.size()); }
  double b_at(int i, int j) const { return bandwidth[static_cast<std::size_t>(i) * cols() + j]; }
  double eta_at(int i, int j) const { return eta_bar[static_cast<std::size_t>(i) * cols() + j]; }
  double tau_b(int i, int j) const { return tau[i] * b_at(i, j); }
};

// eta0(omega) profile from the effective GEM depth: the analytic backend of
// the map builder and the default zeta response source.
inline EfficiencySpectrum analytic_efficiency_profile(const EnsembleConfig& cfg, double beta,
                                                      double tau, int n_omega = 1601) {
  EfficiencySpectrum sp;
  const double wmax = std::abs(beta) * cfg.density.length / 2.0 * 1.05;
  sp.omega.resize(n_omega);
  sp.eta0.resize(n_omega);
  for (int i = 0; i < n_omega; ++i) {
    const double w = -wmax + 2.0 * wmax * i / (n_omega - 1);
    sp.omega[i] = w;
    const double x = 1.0 - std::exp(-two_pi * od_effective(cfg, beta, tau, w));
    sp.eta0[i] = x * x;
  }
  return sp;
}

using ProfileBackend = std::function<EfficiencySpectrum(double rabi, double beta, double tau)>;

inline EfficiencyMap build_efficiency_map(const EnsembleConfig& cfg,
                                          std::span<const double> rabis,
                                          std::span<const double> betas,
                                          const ProfileBackend& backend = {}) {
  if (rabis.empty() || betas.empty())
    throw InvalidParamsError("build_efficiency_map: empty grid");
  EfficiencyMap m;
  m.rabi.assign(rabis.begin(), rabis.end());
  m.beta.assign(betas.begin(), betas.end());
  m.tau.resize(rabis.size());
  m.bandwidth.resize(rabis.size() * betas.size());
  m.eta_bar.resize(rabis.size() * betas.size());
  for (std::size_t i = 0; i < rabis.size(); ++i) {
    const double tau = 1.0 / decoherence_rate(cfg, rabis[i]);
    m.tau[i] = tau;
    for (std::size_t j = 0; j < betas.size(); ++j) {
      const EfficiencySpectrum sp = backend
                                        ? backend(rabis[i], betas[j], tau)
                                        : analytic_efficiency_profile(cfg, betas[j], tau);
      const auto [l, r] = detail::fwhm_crossings(sp.omega, sp.eta0);
      m.bandwidth[i * betas.size() + j] = r - l;
      m.eta_bar[i * betas.size() + j] = averaged_efficiency(sp, tau);
    }
  }
  return m;
}

}  // namespace gemti

#endif
