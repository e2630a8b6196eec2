#ifndef GEMTI_RUNNER_HPP
#define GEMTI_RUNNER_HPP

#include <atomic>
#include <filesystem>
#include <thread>

#include "gemti/io.hpp"
#include "gemti/scenario.hpp"

namespace gemti {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  bool snapshots = false;
  bool analytic = false;
  int jobs = 1;
};

// Per-pass amplitude response 1 - exp(-2 pi OD_eff(omega)) used for the
// analytic model's zeta kernel; OD_eff is the effective GEM depth.
inline std::function<double(double)> amplitude_response(const EnsembleConfig& cfg,
                                                        double beta, double tau) {
  return [cfg, beta, tau](double w) {
    return 1.0 - std::exp(-two_pi * od_effective(cfg, beta, tau, w));
  };
}

// Literal-eta0 variant kept for comparison: the response is the intensity
// efficiency profile itself.
inline std::function<double(double)> literal_eta0_response(const EnsembleConfig& cfg,
                                                           double beta, double tau) {
  return [cfg, beta, tau](double w) {
    const double x = 1.0 - std::exp(-two_pi * od_effective(cfg, beta, tau, w));
    return x * x;
  };
}

// Analytic far-field model of a scenario: spectrum of the input, mapped onto
// the read window with the aperture blur and readout decay.
inline Envelope analytic_scenario_output(const Scenario& sc, const Envelope& input,
                                         const TimeGrid& out_grid) {
  const double tau = 1.0 / decoherence_rate(sc.ensemble, sc.timeline.read.rabi);
  AnalyticModelInput am;
  am.spectrum = to_spectrum(input);
  am.alpha = sc.timeline.write.alpha;
  am.eta_amp = amplitude_response(sc.ensemble, sc.timeline.beta, tau);
  am.t0 = sc.timeline.echo_centroid();
  am.readout_decay_rate = 1.0 / tau;
  return analytic_output(am, out_grid);
}

struct ScenarioResult {
  io::json summary;
  Envelope output;
  double efficiency = 0.0;
};

inline ScenarioResult run_scenario(const Scenario& sc_in, const std::filesystem::path& outdir,
                                   const RunOptions& opts) {
  Scenario sc = sc_in;
  if (opts.seed) sc.detection.rng_seed = *opts.seed;
  if (opts.snapshots && sc.solver.snapshot_interval <= 0.0) sc.solver.snapshot_interval = 0.5;
  if (!opts.snapshots && !sc.outputs.count("kspace_map")) sc.solver.snapshot_interval = 0.0;
  std::filesystem::create_directories(outdir);

  Envelope input = sc.input.kind == InputSpec::Kind::Tabulated
                       ? io::read_envelope_csv(sc.input.tabulated_path)
                       : sc.input.build(sc.timeline.write.duration, sc.omega0);

  ScenarioResult res;
  const double tau_read = 1.0 / decoherence_rate(sc.ensemble, sc.timeline.read.rabi);
  if (opts.analytic) {
    const double dt = sc.timeline.read.duration / 8192;
    TimeGrid og(dt / 2.0, dt, 8192);
    res.output = analytic_scenario_output(sc, input, og);
    // model estimate: spectrum-weighted double-pass efficiency with storage
    // and readout decay
    const Spectrum spc = to_spectrum(input);
    double num = 0.0, den = 0.0;
    const double t_store = (sc.timeline.write.duration - sc.input.center) +
                           sc.timeline.hold.duration;
    for (int i = 0; i < spc.n(); ++i) {
      const double w = spc.omega(i);
      const double p = std::norm(spc.samples[i]);
      const double x =
          1.0 - std::exp(-two_pi * od_effective(sc.ensemble, sc.timeline.beta, tau_read, w));
      const double t_out = sc.timeline.echo_centroid() - w / sc.timeline.write.alpha;
      const double decay = std::exp(-(t_store + std::max(0.0, t_out)) / tau_read);
      num += p * x * x * decay;
      den += p;
    }
    res.efficiency = den > 0.0 ? num / den : 0.0;
  } else {
    SimResult sim = run_sequence(sc.timeline, input, sc.ensemble, sc.solver);
    res.output = std::move(sim.output);
    res.efficiency = sim.efficiency;
    if (sc.outputs.count("kspace_map") && !sim.snapshots.empty())
      io::write_kspace_map(outdir / (sc.name + "_kspace"), sim.snapshots);
  }

  if (sc.outputs.count("envelope_csv"))
    io::write_envelope_csv(outdir / (sc.name + "_output.csv"), res.output);
  if (sc.outputs.count("histogram_csv")) {
    const double t0 = opts.analytic ? 0.0 : sc.timeline.read_start();
    const double t1 = t0 + sc.timeline.read.duration;
    Histogram h = detect(res.output, sc.detection, sc.shots, t0, t1, tau_read);
    io::write_histogram_csv(outdir / (sc.name + "_histogram.csv"), h);
  }

  io::json summary;
  summary["name"] = sc.name;
  summary["backend"] = opts.analytic ? "analytic" : "solver";
  summary["efficiency"] = res.efficiency;
  summary["input_photons"] = input.energy();
  summary["read_start_us"] = sc.timeline.read_start();
  summary["tau_us"] = tau_read;
  summary["bandwidth_rad_per_us"] = std::abs(sc.timeline.beta) * sc.ensemble.density.length;
  summary["echo_centroid_us"] = sc.timeline.echo_centroid();
  summary["seed"] = sc.detection.rng_seed;
  res.summary = summary;
  if (sc.outputs.count("summary_json"))
    io::write_text(outdir / (sc.name + "_summary.json"), summary.dump(2) + "\n");
  return res;
}

// eta0(omega) measured from write-stage absorption of monochromatic pulses;
// the solver-backed alternative to the analytic profile in map construction.
inline EfficiencySpectrum solver_efficiency_profile(const EnsembleConfig& cfg, double rabi,
                                                    double beta, double tau, int n_omega = 9,
                                                    int nz = 256) {
  EfficiencySpectrum sp;
  const double wmax = std::abs(beta) * cfg.density.length / 2.0 * 0.95;
  const double t_write = 24.0;
  for (int i = 0; i < n_omega; ++i) {
    const double w = -wmax + 2.0 * wmax * i / (n_omega - 1);
    ControlSchedule cs;
    cs.stages.push_back({0.0, t_write, rabi, rabi, 0.0, 0.0});
    GradientTimeline gt({{0.0, beta}}, std::numeric_limits<double>::infinity());
    SolverSettings st;
    st.nz = nz;
    st.bandwidth_target = std::abs(beta) * cfg.density.length;
    GemSolver solver(cfg, cs, gt, {}, st);
    TimeGrid g(0.0, t_write / 2048, 2048);
    std::vector<cplx> sm(g.n);
    for (int k = 0; k < g.n; ++k) {
      const double x = (g.t(k) - t_write / 2.0) / 3.0;
      sm[k] = std::exp(-0.5 * x * x) * std::exp(cplx(0.0, w * g.t(k)));
    }
    Envelope in(g, std::move(sm), omega0_from_wavelength_nm(795.0));
    const SimResult r = solver.run(in, t_write, t_write);  // no read window
    double etrans = 0.0;
    for (const auto& a : r.output.samples) etrans += std::norm(a);
    etrans *= r.output.grid.dt;
    const double absorbed = std::max(0.0, 1.0 - etrans / in.energy());
    sp.omega.push_back(w);
    sp.eta0.push_back(absorbed * absorbed);
  }
  return sp;
}

inline EfficiencyMap run_sweep(const SweepSpec& spec, int jobs) {
  EfficiencyMap map;
  map.rabi = spec.rabi;
  map.beta = spec.beta;
  const int nr = map.rows(), nc = map.cols();
  map.tau.resize(nr);
  map.bandwidth.assign(static_cast<std::size_t>(nr) * nc, 0.0);
  map.eta_bar.assign(static_cast<std::size_t>(nr) * nc, 0.0);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int idx = next.fetch_add(1); idx < nr * nc; idx = next.fetch_add(1)) {
      const int i = idx / nc, j = idx % nc;
      const double tau = 1.0 / decoherence_rate(spec.ensemble, spec.rabi[i]);
      map.tau[i] = tau;
      const EfficiencySpectrum sp =
          spec.analytic_backend
              ? analytic_efficiency_profile(spec.ensemble, spec.beta[j], tau)
              : solver_efficiency_profile(spec.ensemble, spec.rabi[i], spec.beta[j], tau);
      const auto [l, r] = detail::fwhm_crossings(sp.omega, sp.eta0);
      map.bandwidth[static_cast<std::size_t>(i) * nc + j] = r - l;
      map.eta_bar[static_cast<std::size_t>(i) * nc + j] = averaged_efficiency(sp, tau);
    }
  };
  const int nthreads = std::max(1, std::min(jobs, nr * nc));
  std::vector<std::thread> pool;
  for (int k = 0; k < nthreads - 1; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return map;
}

}  // namespace gemti

#endif
