#include <catch2/catch_amalgamated.hpp>

#include "gemti/phase_ops.hpp"
#include "gemti/raymatrix.hpp"
#include "gemti/waveforms.hpp"
#include "oracles.hpp"

using namespace gemti;
using Catch::Approx;

namespace {
TimeGrid wide_grid(double span = 40.0, int n = 1024) {
  return TimeGrid(-span / 2.0, span / n, n);
}
}  // namespace

TEST_CASE("to_spectrum: Gaussian maps to Gaussian centered at zero") {
  Envelope env = waveforms::gaussian(wide_grid(), 0.0, 1.0);
  Spectrum sp = to_spectrum(env);
  int kmax = 0;
  for (int k = 1; k < sp.n(); ++k)
    if (std::abs(sp.samples[k]) > std::abs(sp.samples[kmax])) kmax = k;
  CHECK(sp.omega(kmax) == Approx(0.0).margin(sp.domega / 2));
  // |A~|^2 ~ exp(-omega^2) for exp(-t^2/2)
  const double w1 = 1.0;
  const int k1 = static_cast<int>(std::round((w1 - sp.omega_min) / sp.domega));
  const double ratio = std::norm(sp.samples[k1]) / std::norm(sp.samples[kmax]);
  CHECK(ratio == Approx(std::exp(-w1 * w1)).epsilon(0.02));
}

TEST_CASE("to_spectrum: single-sample spike has flat magnitude") {
  TimeGrid g(0.0, 0.1, 128);
  std::vector<cplx> s(g.n, cplx(0.0, 0.0));
  s[64] = 1.0;
  Envelope env(g, std::move(s));
  Spectrum sp = to_spectrum(env);
  const double m0 = std::abs(sp.samples[0]);
  for (int k = 0; k < sp.n(); ++k) CHECK(std::abs(sp.samples[k]) == Approx(m0).epsilon(1e-12));
}

TEST_CASE("to_spectrum: two-pulse fringes at 2 pi / separation") {
  // frozen oracle value: separation 5 us -> spectral fringe period 1.2566 rad/us
  Envelope env = waveforms::two_pulse(wide_grid(60.0, 2048), 0.0, 5.0, 0.6);
  Spectrum sp = to_spectrum(env);
  // brute-force DFT oracle at the fringe minima/maxima
  const double period_expected = two_pi / 5.0;
  CHECK(period_expected == Approx(1.2566).epsilon(1e-4));
  std::vector<double> mags;
  std::vector<double> omegas;
  for (double w = 0.0; w < 3.0; w += 0.01) {
    mags.push_back(std::norm(oracles::brute_spectrum(env, w)));
    omegas.push_back(w);
  }
  // first minimum at half the fringe period, first maximum at the full period
  const int imin = static_cast<int>(std::round(period_expected / 2.0 / 0.01));
  const int imax = static_cast<int>(std::round(period_expected / 0.01));
  CHECK(mags[imin] < 1e-3 * mags[0]);
  CHECK(mags[imax] > 0.5 * mags[0]);
  // FFT path agrees with the brute-force oracle
  for (int k = 0; k < sp.n(); ++k) {
    const double w = sp.omega(k);
    if (std::abs(w) > 3.0) continue;
    const cplx ref = oracles::brute_spectrum(env, w);
    CHECK(std::abs(sp.samples[k] - ref) < 1e-9);
  }
}

TEST_CASE("round trip and Parseval") {
  Envelope env = waveforms::two_pulse(wide_grid(50.0, 1000), 2.0, 7.0, 1.3);
  Spectrum sp = to_spectrum(env);
  CHECK(sp.energy() == Approx(env.energy()).epsilon(1e-10));
  Envelope back = to_envelope(sp);
  double err = 0.0;
  for (int i = 0; i < env.grid.n; ++i) err += std::abs(back.samples[i] - env.samples[i]);
  CHECK(err / env.grid.n < 1e-12);
}

TEST_CASE("lens and propagation matrices") {
  CHECK_THROWS_AS(lens_matrix(0.0), ZeroFocalError);
  const RayMatrix flat = lens_matrix(std::numeric_limits<double>::infinity());
  CHECK(flat.a == 1.0);
  CHECK(flat.c == 0.0);

  const double f = 9.6e3;  // seconds, as quoted
  const RayMatrix lm = lens_matrix(f);
  CHECK(lm.c == Approx(-1.0416666e-4).epsilon(1e-6));
  CHECK(lm.det() == Approx(1.0).margin(1e-12));

  // group property of propagation
  const RayMatrix p12 = propagation_matrix(1.5) * propagation_matrix(2.5);
  CHECK(p12.b == Approx(4.0));
  CHECK(p12.a == 1.0);
  CHECK(propagation_matrix(0.0).b == 0.0);
}

TEST_CASE("Eq.-1 identity: lens prop lens is a pi/2 rotation") {
  for (double f : {1.0, 9.6e3, -3.0}) {
    const RayMatrix m = compose({lens_matrix(f), propagation_matrix(f), lens_matrix(f)});
    CHECK(std::abs(m.a) < 1e-12);
    CHECK(std::abs(m.d) < 1e-12);
    CHECK(m.b == Approx(f).margin(1e-12 * std::abs(f)));
    CHECK(m.c == Approx(-1.0 / f).margin(1e-12 / std::abs(f)));
    CHECK(m.det() == Approx(1.0).margin(1e-12));
  }
  CHECK_THROWS_AS(compose(std::span<const RayMatrix>{}), EmptyListError);
  // applying the rotation twice gives time reversal
  const double f = 2.0;
  const RayMatrix rot = compose({lens_matrix(f), propagation_matrix(f), lens_matrix(f)});
  const RayMatrix twice = rot * rot;
  CHECK(twice.a == Approx(-1.0).margin(1e-12));
  CHECK(twice.d == Approx(-1.0).margin(1e-12));
  CHECK(std::abs(twice.b) < 1e-12);
}

TEST_CASE("symplecticity is preserved under composition (property)") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> un(-5.0, 5.0);
  for (int it = 0; it < 200; ++it) {
    std::vector<RayMatrix> ms;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      double f = un(rng);
      if (std::abs(f) < 0.05) f = 0.5;
      ms.push_back(rng() % 2 ? lens_matrix(f) : propagation_matrix(f));
    }
    CHECK(compose(ms).det() == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("time lens: pure phase with the prescribed chirp rate") {
  Envelope env = waveforms::gaussian(wide_grid(), 0.0, 2.0);
  const double alpha = mhz(0.04);  // rad/us^2
  const double w0_us = rad_s_to_rad_us(env.omega0);
  const double f_t = w0_us / alpha;  // us
  Envelope out = apply_time_lens(env, f_t);
  for (int i = 0; i < env.grid.n; ++i)
    CHECK(std::abs(out.samples[i]) == Approx(std::abs(env.samples[i])).margin(1e-14));
  // instantaneous-frequency slope from finite differences of the unwrapped phase
  const double slope = oracles::phase_slope(out, -1.0, 1.0);
  CHECK(slope == Approx(alpha).epsilon(1e-6));
  // negative focal time flips the shear
  Envelope out2 = apply_time_lens(env, -f_t);
  CHECK(oracles::phase_slope(out2, -1.0, 1.0) == Approx(-alpha).epsilon(1e-6));
  CHECK_THROWS_AS(apply_time_lens(env, 0.0), ZeroFocalError);
}

TEST_CASE("temporal propagation: spectral magnitude kept, narrowband delayed") {
  TimeGrid g = wide_grid(80.0, 2048);
  const double w1 = 1.2;  // rad/us offset
  Envelope env = waveforms::gaussian(g, 0.0, 6.0);
  for (int i = 0; i < g.n; ++i) env.samples[i] *= std::exp(cplx(0.0, w1 * g.t(i)));

  const double f_t = 3.0e9;  // us; f_t * w1 / omega0 = a few us
  Envelope out = apply_temporal_propagation(env, f_t);
  CHECK(out.energy() == Approx(env.energy()).epsilon(1e-10));
  Spectrum si = to_spectrum(env), so = to_spectrum(out);
  for (int k = 0; k < si.n(); ++k)
    CHECK(std::abs(so.samples[k]) == Approx(std::abs(si.samples[k])).margin(1e-12));
  const double delay_expected = f_t * w1 / rad_s_to_rad_us(env.omega0);
  REQUIRE(delay_expected > 1.0);
  const double c0 = oracles::centroid(env);
  const double c1 = oracles::centroid(out);
  CHECK(c1 - c0 == Approx(delay_expected).epsilon(0.01));
}

TEST_CASE("cascade lens-prop-lens produces the input power spectrum in time") {
  TimeGrid g = wide_grid(400.0, 8192);
  Envelope env = waveforms::two_pulse(g, 0.0, 5.0, 1.0);
  const double alpha = mhz(0.04);
  const double w0_us = rad_s_to_rad_us(env.omega0);
  const double f_t = w0_us / alpha;
  Envelope out = apply_time_lens(
      apply_temporal_propagation(apply_time_lens(env, f_t), f_t), f_t);
  // |A_out(t)|^2 ~ |A~(omega0 t / f_t)|^2 = |A~(alpha t)|^2
  Spectrum sp = to_spectrum(env);
  double num = 0.0, d1 = 0.0, d2 = 0.0;
  for (int i = 0; i < g.n; i += 4) {
    const double t = g.t(i);
    const double w = alpha * t;
    if (std::abs(w) > 2.5) continue;
    const double a = std::norm(out.samples[i]);
    const double b = std::norm(oracles::brute_spectrum(env, w));
    num += a * b;
    d1 += a * a;
    d2 += b * b;
  }
  const double ncc = num / std::sqrt(d1 * d2);
  CHECK(ncc > 0.999);
}
