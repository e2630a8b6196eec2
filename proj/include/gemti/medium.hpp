#ifndef GEMTI_MEDIUM_HPP
#define GEMTI_MEDIUM_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gemti/errors.hpp"
#include "gemti/grid.hpp"
#include "gemti/units.hpp"

namespace gemti {

// ---------------------------------------------------------------------------
// Atomic density profile n(z) on [-L/2, L/2], normalized so that the integral
// over the window is 1; g n(z) = od * value(z).
// ---------------------------------------------------------------------------
struct DensityProfile {
  enum class Kind { Uniform, SuperGaussian, Tabulated };

  Kind kind = Kind::Uniform;
  double length = 1.0;        // cm, simulation window
  int order = 4;              // super-Gaussian exponent (even)
  double width = 0.8;         // super-Gaussian FWHM (cm)
  std::vector<double> tab_z;  // tabulated support
  std::vector<double> tab_v;

  static DensityProfile uniform(double length_cm) {
    DensityProfile p;
    p.kind = Kind::Uniform;
    p.length = length_cm;
    p.validate();
    return p;
  }

  // FWHM-parameterized: exp(-ln2 * (2 z / width)^order)
  static DensityProfile super_gaussian(double length_cm, double fwhm_cm, int order = 4) {
    DensityProfile p;
    p.kind = Kind::SuperGaussian;
    p.length = length_cm;
    p.width = fwhm_cm;
    p.order = order;
    p.validate();
    return p;
  }

  static DensityProfile tabulated(double length_cm, std::vector<double> z,
                                  std::vector<double> v) {
    DensityProfile p;
    p.kind = Kind::Tabulated;
    p.length = length_cm;
    p.tab_z = std::move(z);
    p.tab_v = std::move(v);
    p.validate();
    return p;
  }

  void validate() {
    if (!(length > 0.0)) throw InvalidParamsError("density: non-positive length");
    if (kind == Kind::SuperGaussian) {
      if (order < 2 || order % 2 != 0)
        throw InvalidParamsError("density: super-Gaussian order must be even and >= 2");
      if (!(width > 0.0)) throw InvalidParamsError("density: non-positive width");
    }
    if (kind == Kind::Tabulated) {
      if (tab_z.size() != tab_v.size() || tab_z.size() < 2)
        throw InvalidParamsError("density: tabulated profile needs matching z/value arrays");
      for (std::size_t i = 1; i < tab_z.size(); ++i)
        if (!(tab_z[i] > tab_z[i - 1]))
          throw InvalidParamsError("density: tabulated z must be strictly increasing");
      for (double v : tab_v)
        if (v < 0.0 || !std::isfinite(v))
          throw InvalidParamsError("density: tabulated values must be finite and nonnegative");
    }
    norm_ = 1.0;
    norm_ = 1.0 / integral();
  }

  double raw(double z) const {
    switch (kind) {
      case Kind::Uniform:
        return (std::abs(z) <= length / 2.0) ? 1.0 : 0.0;
      case Kind::SuperGaussian: {
        if (std::abs(z) > length / 2.0) return 0.0;
        return std::exp(-std::numbers::ln2 * std::pow(std::abs(2.0 * z / width), order));
      }
      case Kind::Tabulated: {
        if (z <= tab_z.front() || z >= tab_z.back()) return 0.0;
        auto it = std::upper_bound(tab_z.begin(), tab_z.end(), z);
        const std::size_t i = static_cast<std::size_t>(it - tab_z.begin());
        const double f = (z - tab_z[i - 1]) / (tab_z[i] - tab_z[i - 1]);
        return tab_v[i - 1] * (1.0 - f) + tab_v[i] * f;
      }
    }
    return 0.0;
  }

  // normalized profile, integral over [-L/2, L/2] equals 1
  double value(double z) const { return norm_ * raw(z); }

 private:
  double norm_ = 1.0;

  double integral() const {
    // composite Simpson on a fixed fine lattice; deterministic
    const int m = 8192;
    const double a = -length / 2.0, h = length / m;
    double s = raw(a) + raw(a + length);
    for (int i = 1; i < m; ++i) s += raw(a + i * h) * (i % 2 ? 4.0 : 2.0);
    s *= h / 3.0;
    if (!(s > 0.0)) throw InvalidParamsError("density: profile integrates to zero");
    return s;
  }
};

// ---------------------------------------------------------------------------
// Ensemble parameters. All rates in rad/us.
// ---------------------------------------------------------------------------
struct EnsembleConfig {
  double od = 70.0;
  double gamma = mhz(5.75);   // |e> decay rate (D1 natural linewidth default)
  double delta = mhz(70.0);   // single-photon detuning
  double delta0 = 0.0;        // static two-photon offset
  DensityProfile density = DensityProfile::super_gaussian(1.0, 0.8);

  std::vector<std::string> validate() const {
    if (od < 0.0) throw InvalidParamsError("ensemble: od must be nonnegative");
    if (!(gamma > 0.0)) throw InvalidParamsError("ensemble: gamma must be positive");
    std::vector<std::string> warnings;
    if (std::abs(delta) < 5.0 * gamma)
      warnings.push_back("|delta| < 5*gamma: adiabatic elimination is marginal");
    return warnings;
  }

  double gn(double z) const { return od * density.value(z); }
};

// ---------------------------------------------------------------------------
// Control field schedule: non-overlapping stages with amplitude ramp and
// per-stage two-photon chirp alpha referenced to chirp_t_ref.
// ---------------------------------------------------------------------------
struct ControlStage {
  double t_start = 0.0;
  double t_end = 0.0;
  double rabi0 = 0.0;     // rad/us at t_start
  double rabi1 = 0.0;     // rad/us at t_end (linear ramp)
  double alpha = 0.0;     // rad/us^2
  double chirp_t_ref = 0.0;
};

struct ControlSchedule {
  std::vector<ControlStage> stages;

  void validate() const {
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& s = stages[i];
      if (!(s.t_end > s.t_start))
        throw InvalidParamsError("control stage " + std::to_string(i) + ": empty interval");
      if (s.rabi0 < 0.0 || s.rabi1 < 0.0)
        throw InvalidParamsError("control stage " + std::to_string(i) + ": negative Rabi");
      if (i > 0 && stages[i].t_start < stages[i - 1].t_end - 1e-12)
        throw InvalidParamsError("control stages overlap or are out of order at index " +
                                 std::to_string(i));
    }
  }

  const ControlStage* stage_at(double t) const {
    for (const auto& s : stages)
      if (t >= s.t_start && t < s.t_end) return &s;
    return nullptr;
  }

  double rabi(double t) const {
    const ControlStage* s = stage_at(t);
    if (!s) return 0.0;
    const double f = (t - s->t_start) / (s->t_end - s->t_start);
    return s->rabi0 + (s->rabi1 - s->rabi0) * f;
  }

  // instantaneous two-photon chirp detuning alpha*(t - t_ref), 0 off-stage
  double chirp(double t) const {
    const ControlStage* s = stage_at(t);
    return s ? s->alpha * (t - s->chirp_t_ref) : 0.0;
  }
};

// ---------------------------------------------------------------------------
// Zeeman gradient beta(t): piecewise-linear knots with a slew-rate limit,
// checked at construction. Optional first-order settling lag (off by default)
// models eddy-current smoothing; evaluated in closed form per segment.
// ---------------------------------------------------------------------------
struct GradientTimeline {
  struct Knot {
    double t;
    double beta;  // rad/us/cm
  };

  std::vector<Knot> knots;
  double slew_limit = std::numeric_limits<double>::infinity();  // rad/us/cm per us
  double settling_lag = 0.0;                                    // us, 0 = off
  double zeeman_offset = 0.0;                                   // rad/us

  GradientTimeline() = default;
  GradientTimeline(std::vector<Knot> ks, double slew,
                   double lag = 0.0, double offset = 0.0)
      : knots(std::move(ks)), slew_limit(slew), settling_lag(lag), zeeman_offset(offset) {
    if (knots.size() < 1) throw InvalidParamsError("gradient: need at least one knot");
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double dtk = knots[i].t - knots[i - 1].t;
      if (!(dtk > 0.0))
        throw InvalidParamsError("gradient: knots not strictly time-ordered at index " +
                                 std::to_string(i));
      const double rate = std::abs(knots[i].beta - knots[i - 1].beta) / dtk;
      if (rate > slew_limit * (1.0 + 1e-12))
        throw InvalidParamsError("gradient: slew-limit violation on segment " +
                                 std::to_string(i - 1) + " -> " + std::to_string(i) +
                                 " (" + std::to_string(rate) + " > " +
                                 std::to_string(slew_limit) + ")");
    }
    if (settling_lag < 0.0) throw InvalidParamsError("gradient: negative settling lag");
  }

  // write -beta_w, linear ramp of `ramp` us centered at t_flip, read +beta_w
  static GradientTimeline ramped_flip(double beta_write, double t_flip, double ramp,
                                      double slew = std::numeric_limits<double>::infinity(),
                                      double lag = 0.0) {
    if (ramp <= 0.0)
      return GradientTimeline({{t_flip, -beta_write}, {t_flip + 1e-9, beta_write}},
                              std::numeric_limits<double>::infinity(), lag);
    return GradientTimeline({{t_flip - ramp / 2.0, -beta_write},
                             {t_flip + ramp / 2.0, beta_write}},
                            slew, lag);
  }

  double raw_beta(double t) const {
    if (t <= knots.front().t) return knots.front().beta;
    if (t >= knots.back().t) return knots.back().beta;
    for (std::size_t i = 1; i < knots.size(); ++i) {
      if (t <= knots[i].t) {
        const double f = (t - knots[i - 1].t) / (knots[i].t - knots[i - 1].t);
        return knots[i - 1].beta + (knots[i].beta - knots[i - 1].beta) * f;
      }
    }
    return knots.back().beta;
  }

  // beta(t) with the optional first-order lag: y' = (raw - y)/lag, y(-inf)=raw
  double beta(double t) const {
    if (settling_lag <= 0.0) return raw_beta(t);
    const double tl = settling_lag;
    double y = knots.front().beta;
    double tcur = knots.front().t;
    auto advance = [&](double b0, double slope, double dt) {
      // exact solution over a linear-input segment
      const double e = std::exp(-dt / tl);
      y = b0 + slope * dt - slope * tl + (y - b0 + slope * tl) * e;
    };
    for (std::size_t i = 1; i < knots.size() && tcur < t; ++i) {
      const double t1 = std::min(knots[i].t, t);
      const double seg = knots[i].t - knots[i - 1].t;
      const double slope = (knots[i].beta - knots[i - 1].beta) / seg;
      const double b0 = knots[i - 1].beta + slope * (tcur - knots[i - 1].t);
      advance(b0, slope, t1 - tcur);
      tcur = t1;
    }
    if (tcur < t) advance(knots.back().beta, 0.0, t - tcur);
    return y;
  }
};

// ---------------------------------------------------------------------------
// SSM phase pulse: spatial phase imprinted on the stored spin wave.
// Instantaneous mode applies the whole profile at t_apply; distributed mode
// feeds phase/duration as a detuning over [t_apply - d/2, t_apply + d/2].
// ---------------------------------------------------------------------------
struct SsmPulse {
  enum class Mode { Instantaneous, Distributed };

  double t_apply = 0.0;
  double duration = 3.0;
  Mode mode = Mode::Instantaneous;
  double parabolic_coefficient = 0.0;  // rad/cm^2; phase(z) = -coeff * z^2
  std::vector<double> tab_z;           // optional tabulated phase profile
  std::vector<double> tab_phase;

  void validate() const {
    if (!(duration > 0.0)) throw InvalidParamsError("ssm: non-positive duration");
    if (!tab_z.empty() && tab_z.size() != tab_phase.size())
      throw InvalidParamsError("ssm: tabulated arrays must match");
    if (!std::isfinite(parabolic_coefficient))
      throw InvalidParamsError("ssm: non-finite coefficient");
  }

  double phase(double z) const {
    if (!tab_z.empty()) {
      if (z <= tab_z.front()) return tab_phase.front();
      if (z >= tab_z.back()) return tab_phase.back();
      auto it = std::upper_bound(tab_z.begin(), tab_z.end(), z);
      const std::size_t i = static_cast<std::size_t>(it - tab_z.begin());
      const double f = (z - tab_z[i - 1]) / (tab_z[i] - tab_z[i - 1]);
      return tab_phase[i - 1] * (1.0 - f) + tab_phase[i] * f;
    }
    return -parabolic_coefficient * z * z;
  }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// ac-Stark shift of the two-photon line from the control field
inline double ac_stark_shift(double rabi, double delta, double gamma) {
  return rabi * rabi * delta / (4.0 * delta * delta + gamma * gamma);
}

// 1/tau: intensity/population decay rate of the stored efficiency,
// Gamma |Omega|^2 / (4 Delta^2 + Gamma^2). The coherence amplitude decays at
// half this rate, 1/(2 tau).
inline double decoherence_rate(const EnsembleConfig& cfg, double omega_rabi) {
  return cfg.gamma * omega_rabi * omega_rabi /
         (4.0 * cfg.delta * cfg.delta + cfg.gamma * cfg.gamma);
}

// Effective GEM depth seen by frequency omega: gn(z = omega/beta)/(4 tau |beta|).
// The storage-and-retrieval efficiency is [1 - exp(-2 pi OD_eff)]^2; for a
// uniform profile this reduces to OD/(4 tau B) with B = |beta| L.
inline double od_effective(const EnsembleConfig& cfg, double beta, double tau,
                           double omega) {
  if (beta == 0.0) throw ZeroGradientError("od_effective: zero gradient");
  if (!(tau > 0.0)) throw InvalidParamsError("od_effective: tau must be positive");
  return cfg.gn(omega / beta) / (4.0 * tau * std::abs(beta));
}

// Total two-photon detuning delta_tot(z, t) = delta0 + delta_acS + chirp +
// delta_SSM + delta_Z, with the chirp alpha*(t - t_ref) active during chirped
// stages. ssm_rate supplies the distributed-SSM detuning (0 if unused).
inline double detuning_total(const EnsembleConfig& cfg, const ControlSchedule& sched,
                             const GradientTimeline& grad,
                             const std::function<double(double, double)>& ssm_rate,
                             double z, double t) {
  const double rabi = sched.rabi(t);
  double d = cfg.delta0 + ac_stark_shift(rabi, cfg.delta, cfg.gamma) + sched.chirp(t);
  if (ssm_rate) d += ssm_rate(z, t);
  d += grad.zeeman_offset + grad.beta(t) * z;
  return d;
}

// SSM parabolic coefficient beta^2/(2 alpha): coefficient of -z^2 in the
// imprinted Fresnel phase.
inline double ssm_parabolic_coefficient(double beta, double alpha) {
  if (alpha == 0.0) throw ZeroChirpError("ssm_parabolic_coefficient: zero chirp");
  return beta * beta / (2.0 * alpha);
}

// Time-lens focal length f_t = omega0/alpha, both arguments in SI (rad/s,
// rad/s^2); result in seconds.
inline double focal_from_chirp(double omega0_rad_s, double alpha_rad_s2) {
  if (alpha_rad_s2 == 0.0) throw ZeroChirpError("focal_from_chirp: zero chirp");
  return omega0_rad_s / alpha_rad_s2;
}

}  // namespace gemti

#endif
