#ifndef GEMTI_PROTOCOL_HPP
#define GEMTI_PROTOCOL_HPP

#include <cstdint>
#include <functional>
#include <random>

#include "gemti/solver.hpp"

namespace gemti {

// ---------------------------------------------------------------------------
// Three-stage far-field sequence: chirped write (lens), hold with gradient
// reversal + SSM parabolic phase (propagation), read (lens omitted by default
// since the SPCM registers only intensity).
// ---------------------------------------------------------------------------
struct SequenceTimeline {
  struct WriteStage {
    double duration = 20.0;
    double rabi = mhz(4.7);
    double alpha = mhz(0.04);   // rad/us^2
    double chirp_t_ref = 10.0;  // chirp zero; sets the output time origin
  };
  struct HoldStage {
    double duration = 10.0;
    double ramp = 7.0;  // gradient reversal time
    std::vector<SsmPulse> ssm;
  };
  struct ReadStage {
    double duration = 50.0;
    double rabi = mhz(4.7);
    double alpha = 0.0;  // chirped-read variant only
    double chirp_t_ref = 0.0;
  };

  WriteStage write;
  HoldStage hold;
  ReadStage read;
  double beta = mhz(1.7);  // gradient magnitude: write at -beta, read at +beta
  double slew_limit = mhz(0.5);
  double settling_lag = 0.0;

  double read_start() const { return write.duration + hold.duration; }
  double total_duration() const { return read_start() + read.duration; }

  // read-window time at which the carrier (omega = 0) is re-emitted
  double echo_centroid() const { return write.duration - write.chirp_t_ref; }

  void validate() const {
    if (!(write.duration > 0.0) || !(read.duration > 0.0))
      throw InvalidParamsError("timeline: write/read duration must be positive");
    if (hold.duration < 0.0) throw InvalidParamsError("timeline: negative hold");
    if (hold.ramp > hold.duration + 1e-12 && hold.duration > 0.0)
      throw InvalidParamsError("timeline: gradient ramp longer than the hold stage");
    if (beta == 0.0) throw InvalidParamsError("timeline: zero gradient");
    for (const auto& p : hold.ssm) {
      p.validate();
      if (p.t_apply < write.duration - 1e-9 || p.t_apply > read_start() + 1e-9)
        throw InvalidParamsError("timeline: SSM pulse outside the hold stage");
    }
  }

  ControlSchedule control() const {
    ControlSchedule cs;
    cs.stages.push_back({0.0, write.duration, write.rabi, write.rabi, write.alpha,
                         write.chirp_t_ref});
    cs.stages.push_back({read_start(), total_duration(), read.rabi, read.rabi,
                         read.alpha, read.chirp_t_ref});
    cs.validate();
    return cs;
  }

  GradientTimeline gradient() const {
    const double t_flip = write.duration + hold.duration / 2.0;
    if (hold.duration <= 0.0 || hold.ramp <= 0.0)
      return GradientTimeline::ramped_flip(beta, read_start(), 0.0,
                                           std::numeric_limits<double>::infinity(),
                                           settling_lag);
    return GradientTimeline::ramped_flip(beta, t_flip, hold.ramp, slew_limit,
                                         settling_lag);
  }
};

struct StandardSequenceParams {
  double beta = mhz(1.7);
  double alpha = mhz(0.04);
  double rabi = mhz(4.7);
  double write_duration = 20.0;
  double hold_duration = 10.0;
  double read_duration = 50.0;
  double ramp = 7.0;
  double ssm_duration = 3.0;
  double ssm_coefficient = std::numeric_limits<double>::quiet_NaN();  // NaN = beta^2/(2 alpha)
  bool chirped_read = false;
  double slew_limit = mhz(0.5);
};

inline SequenceTimeline build_standard_sequence(const StandardSequenceParams& p) {
  if (p.alpha == 0.0 || p.beta == 0.0)
    throw InvalidParamsError("build_standard_sequence: alpha and beta must be nonzero");
  SequenceTimeline tl;
  tl.beta = p.beta;
  tl.slew_limit = p.slew_limit;
  tl.write.duration = p.write_duration;
  tl.write.rabi = p.rabi;
  tl.write.alpha = p.alpha;
  tl.write.chirp_t_ref = p.write_duration / 2.0;
  tl.hold.duration = p.hold_duration;
  tl.hold.ramp = std::min(p.ramp, p.hold_duration);
  SsmPulse ssm;
  ssm.t_apply = p.write_duration + p.hold_duration / 2.0;
  ssm.duration = p.ssm_duration;
  ssm.parabolic_coefficient = std::isnan(p.ssm_coefficient)
                                  ? ssm_parabolic_coefficient(p.beta, p.alpha)
                                  : p.ssm_coefficient;
  tl.hold.ssm.push_back(ssm);
  tl.read.duration = p.read_duration;
  tl.read.rabi = p.rabi;
  if (p.chirped_read) {
    tl.read.alpha = p.alpha;
    // reference the read chirp to the echo centroid (the AOM center frequency
    // is free in the experiment); the residual difference is the Delta drift
    tl.read.chirp_t_ref = tl.read_start() + tl.echo_centroid();
  }
  tl.validate();
  return tl;
}

inline SimResult run_sequence(const SequenceTimeline& tl, const Envelope& input,
                              const EnsembleConfig& cfg, const SolverSettings& settings) {
  tl.validate();
  GemSolver solver(cfg, tl.control(), tl.gradient(), tl.hold.ssm, settings);
  return solver.run(input, tl.total_duration(), tl.read_start());
}

// ---------------------------------------------------------------------------
// Analytic finite-aperture output model:
//   A_out(t) ~ ([A~(w) e^{-i w^2/(2a)}] * zeta * zeta)(t) e^{+i(a/2)(t0-t)^2}
// evaluated on the far-field mapping w = alpha (t0 - t), with zeta the
// transform of the per-pass amplitude response eta_amp(omega). Optional
// readout decay multiplies the emitted amplitude by exp(-t/(2 tau)).
// ---------------------------------------------------------------------------
struct AnalyticModelInput {
  Spectrum spectrum;  // input spectral amplitude (source-grid metadata required)
  double alpha = mhz(0.04);
  std::function<double(double)> eta_amp;  // per-pass amplitude response in [0,1]
  double t0 = 10.0;                       // output time of the carrier
  double readout_decay_rate = 0.0;        // 1/tau (intensity); 0 = off
  bool normalize_peak = true;
};

inline Envelope analytic_output(const AnalyticModelInput& inp, const TimeGrid& out_grid) {
  if (inp.alpha == 0.0) throw ZeroChirpError("analytic_output: zero chirp");
  if (inp.spectrum.n() < 2 || !(inp.spectrum.dt > 0.0))
    throw InvalidParamsError("analytic_output: bad input spectrum");
  const int n = out_grid.n;
  const double nyquist = pi / inp.spectrum.dt;
  // exact evaluation of A~ at the mapped frequencies via the DFT definition
  const Envelope src = to_envelope(inp.spectrum);
  std::vector<cplx> g(n);
  const double scale = src.grid.dt / std::sqrt(two_pi);
  for (int j = 0; j < n; ++j) {
    const double w = inp.alpha * (inp.t0 - out_grid.t(j));
    if (std::abs(w) > nyquist)
      throw UndersampledSpectrumError(
          "analytic_output: mapped frequency exceeds the spectrum's Nyquist range");
    cplx acc(0.0, 0.0);
    for (int i = 0; i < src.grid.n; ++i)
      acc += src.samples[i] * std::exp(cplx(0.0, -w * src.grid.t(i)));
    g[j] = acc * scale * std::exp(cplx(0.0, -w * w / (2.0 * inp.alpha)));
  }
  // double pass through the aperture: multiply by eta_amp^2 in the conjugate
  // domain of the output grid (nu <-> alpha*(t0-t) up to sign)
  if (inp.eta_amp) {
    std::vector<cplx> G = dft(g);
    const double dnu = two_pi / (n * out_grid.dt);
    for (int k = 0; k < n; ++k) {
      const int kw = k <= n / 2 ? k : k - n;  // wrapped conjugate index
      // F[zeta](nu) = (2 pi/|beta|) eta_amp(nu): the blur kernel's transform
      // is the response profile in its own omega units (constants drop under
      // peak normalization)
      const double r = inp.eta_amp(kw * dnu);
      G[k] *= r * r;
    }
    std::vector<cplx> gi = idft(G);
    g = std::move(gi);
  }
  Envelope out(out_grid, std::vector<cplx>(n), inp.spectrum.omega0);
  for (int j = 0; j < n; ++j) {
    const double u = inp.t0 - out_grid.t(j);
    cplx v = g[j] * std::exp(cplx(0.0, u * u * inp.alpha / 2.0));
    if (inp.readout_decay_rate > 0.0 && out_grid.t(j) >= 0.0)
      v *= std::exp(-0.5 * inp.readout_decay_rate * out_grid.t(j));
    out.samples[j] = v;
  }
  if (inp.normalize_peak) {
    const double p = out.peak_abs();
    if (p > 0.0)
      for (auto& v : out.samples) v /= p;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Detection: expected per-shot counts per bin plus uniform control-leakage
// noise, Poisson-sampled per shot with sub-seeds derived from (seed, shot).
// ---------------------------------------------------------------------------
struct DetectionModel {
  double path_transmission = 0.60;
  double detector_efficiency = 0.65;
  double noise_mean_per_tau = 0.023;
  double bin_width = 0.5;  // us
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (path_transmission < 0.0 || path_transmission > 1.0 ||
        detector_efficiency < 0.0 || detector_efficiency > 1.0)
      throw InvalidParamsError("detection: transmissions must be in [0,1]");
    if (noise_mean_per_tau < 0.0) throw InvalidParamsError("detection: negative noise");
    if (!(bin_width > 0.0)) throw InvalidParamsError("detection: bin width must be positive");
  }
};

struct Histogram {
  std::vector<double> bin_start;        // us
  std::vector<std::uint64_t> counts;    // summed over shots
  std::vector<double> lambda_per_shot;  // expected counts per shot per bin
  double bin_width = 0.5;
  int shots = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline Histogram detect(const Envelope& output, const DetectionModel& model, int shots,
                        double window_start, double window_end, double tau) {
  model.validate();
  if (shots < 1) throw InvalidParamsError("detect: shots must be >= 1");
  if (!(tau > 0.0)) throw InvalidParamsError("detect: tau must be positive");
  const int nbins = std::max(1, static_cast<int>(std::floor(
                                    (window_end - window_start) / model.bin_width + 1e-9)));
  Histogram h;
  h.bin_width = model.bin_width;
  h.shots = shots;
  h.bin_start.resize(nbins);
  h.lambda_per_shot.assign(nbins, 0.0);
  h.counts.assign(nbins, 0);
  const double qe = model.path_transmission * model.detector_efficiency;
  for (int b = 0; b < nbins; ++b) {
    h.bin_start[b] = window_start + b * model.bin_width;
    h.lambda_per_shot[b] = model.noise_mean_per_tau * (model.bin_width / tau);
  }
  const auto& g = output.grid;
  for (int i = 0; i < g.n; ++i) {
    const double t = g.t(i);
    if (t < window_start || t >= window_start + nbins * model.bin_width) continue;
    const int b = static_cast<int>((t - window_start) / model.bin_width);
    h.lambda_per_shot[b] += qe * std::norm(output.samples[i]) * g.dt;
  }
  for (int s = 0; s < shots; ++s) {
    std::mt19937_64 rng(splitmix64(model.rng_seed ^ splitmix64(static_cast<std::uint64_t>(s))));
    for (int b = 0; b < nbins; ++b) {
      if (h.lambda_per_shot[b] <= 0.0) continue;
      std::poisson_distribution<std::uint64_t> pd(h.lambda_per_shot[b]);
      h.counts[b] += pd(rng);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Chirped vs unchirped readout comparison (supplement's simplified protocol):
// returns max_t | |A1|^2 - |A2|^2 | / max_t |A1|^2 over the read window.
// ---------------------------------------------------------------------------
inline double compare_chirped_read(const SequenceTimeline& timeline, const Envelope& input,
                                   const EnsembleConfig& cfg, const SolverSettings& settings) {
  SequenceTimeline unchirped = timeline;
  unchirped.read.alpha = 0.0;
  SequenceTimeline chirped = timeline;
  chirped.read.alpha = timeline.write.alpha;
  chirped.read.chirp_t_ref = timeline.read_start() + timeline.echo_centroid();
  const SimResult r1 = run_sequence(unchirped, input, cfg, settings);
  const SimResult r2 = run_sequence(chirped, input, cfg, settings);
  double peak = 0.0, diff = 0.0;
  for (int i = 0; i < r1.output.grid.n; ++i) {
    if (r1.output.grid.t(i) < r1.read_start) continue;
    const double i1 = std::norm(r1.output.samples[i]);
    const double i2 = std::norm(r2.output.samples[i]);
    peak = std::max(peak, i1);
    diff = std::max(diff, std::abs(i1 - i2));
  }
  return peak > 0.0 ? diff / peak : 0.0;
}

}  // namespace gemti

#endif
