// Command-line front end: scenario simulation, parameter sweeps, waveform
// analysis, validation, and the resolution-prefactor utility.
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime/solver error.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "gemti/runner.hpp"

namespace {

struct SlopePoint {
  double f_mhz;
  std::string path;
};

int do_simulate(const std::string& config, const std::string& out, gemti::RunOptions opts,
                bool validate_only) {
  gemti::Scenario sc = gemti::load_scenario(config);
  if (validate_only) {
    std::printf("ok: scenario '%s' is valid\n", sc.name.c_str());
    for (const auto& w : sc.ensemble.validate()) std::printf("warning: %s\n", w.c_str());
    return 0;
  }
  gemti::ScenarioResult res = gemti::run_scenario(sc, out, opts);
  std::printf("%s\n", res.summary.dump(2).c_str());
  return 0;
}

int do_sweep(const std::string& config, const std::string& out, int jobs) {
  gemti::SweepSpec spec = gemti::load_sweep(config);
  gemti::EfficiencyMap map = gemti::run_sweep(spec, jobs);
  std::filesystem::create_directories(out);
  gemti::io::write_map_csv(std::filesystem::path(out) / (spec.name + "_map.csv"), map);
  gemti::io::write_map_binary(std::filesystem::path(out) / (spec.name + "_map"), map);
  std::printf("wrote %dx%d efficiency map to %s\n", map.rows(), map.cols(), out.c_str());
  return 0;
}

std::pair<std::vector<double>, std::vector<double>> load_trace(const std::string& path) {
  std::vector<double> t, v;
  if (path.ends_with("histogram.csv") || path.find("hist") != std::string::npos) {
    gemti::Histogram h = gemti::io::read_histogram_csv(path);
    t = h.bin_start;
    for (auto c : h.counts) v.push_back(static_cast<double>(c));
  } else {
    gemti::Envelope env = gemti::io::read_envelope_csv(path);
    for (int i = 0; i < env.grid.n; ++i) {
      t.push_back(env.grid.t(i));
      v.push_back(std::norm(env.samples[i]));
    }
  }
  return {t, v};
}

int do_analyze(const std::vector<std::string>& fwhm_files,
               const std::vector<std::string>& fringe_files,
               const std::vector<std::string>& slope_args, bool prefactor) {
  gemti::io::json report;
  for (const auto& f : fwhm_files) {
    auto [t, v] = load_trace(f);
    const gemti::WaveformStats st = gemti::analyze_waveform(t, v);
    gemti::io::json j;
    j["file"] = f;
    j["fwhm_us"] = st.fwhm;
    j["peaks_us"] = st.peak_positions;
    report["fwhm"].push_back(j);
  }
  for (const auto& f : fringe_files) {
    auto [t, v] = load_trace(f);
    const gemti::WaveformStats st = gemti::analyze_waveform(t, v);
    gemti::io::json j;
    j["file"] = f;
    if (st.fringe_period) j["fringe_period_us"] = *st.fringe_period;
    if (st.visibility) j["visibility"] = *st.visibility;
    report["fringe"].push_back(j);
  }
  if (!slope_args.empty()) {
    std::vector<double> fs, seps;
    for (const auto& a : slope_args) {
      const auto eq = a.find('=');
      if (eq == std::string::npos)
        throw gemti::ConfigError("--peaks-at expects f_mhz=path, got '" + a + "'");
      const double f = std::stod(a.substr(0, eq));
      auto [t, v] = load_trace(a.substr(eq + 1));
      const gemti::WaveformStats st = gemti::analyze_waveform(t, v);
      if (st.peak_positions.size() < 2)
        throw gemti::Error("fewer than two peaks in " + a.substr(eq + 1));
      const double p1 = st.peak_positions[0], p2 = st.peak_positions[1];
      fs.push_back(f);
      seps.push_back(std::abs(p2 - p1));
    }
    const gemti::LinearFit fit = gemti::linear_fit(fs, seps);
    report["delay_fit"] = {{"slope_us_per_mhz", fit.slope},
                           {"intercept_us", fit.intercept},
                           {"r2", fit.r2}};
  }
  if (prefactor) report["resolution_prefactor"] = gemti::resolution_prefactor();
  std::printf("%s\n", report.dump(2).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gemti: far-field temporal imaging in a gradient echo memory"};
  app.require_subcommand(1);

  std::string config, out = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
  bool seed_set = false, snapshots = false, analytic = false;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* copt = cmd->add_option("--config", config, "scenario/sweep YAML path");
    if (needs_config) copt->required();
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--jobs", jobs, "worker threads for sweeps");
    cmd->add_option("--seed", seed, "detection RNG seed override")
        ->each([&](const std::string&) { seed_set = true; });
    cmd->add_flag("--snapshots", snapshots, "record coherence snapshots");
    cmd->add_flag("--analytic", analytic, "use the analytic output model, not the solver");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run a scenario and write its outputs");
  add_common(sim, true);
  bool validate_flag = false;
  sim->add_flag("--validate", validate_flag, "parse and check only (dry run)");

  CLI::App* val = app.add_subcommand("validate", "parse and validate a scenario");
  add_common(val, true);

  CLI::App* swp = app.add_subcommand("sweep", "build an efficiency map over a grid");
  add_common(swp, true);

  CLI::App* ana = app.add_subcommand("analyze", "waveform analysis of output files");
  std::vector<std::string> fwhm_files, fringe_files, slope_args;
  bool want_prefactor = false;
  ana->add_option("--fwhm", fwhm_files, "envelope/histogram CSV: report FWHM and peaks");
  ana->add_option("--fringe", fringe_files, "envelope/histogram CSV: report fringe period");
  ana->add_option("--peaks-at", slope_args,
                  "f_mhz=path pairs: fit peak separation vs modulation frequency");
  ana->add_flag("--prefactor", want_prefactor, "report the resolution prefactor");

  CLI::App* pre = app.add_subcommand("prefactor", "print the spectral-resolution prefactor");

  CLI11_PARSE(app, argc, argv);

  gemti::RunOptions opts;
  if (seed_set) opts.seed = seed;
  opts.snapshots = snapshots;
  opts.analytic = analytic;
  opts.jobs = jobs;

  try {
    if (app.got_subcommand(sim)) return do_simulate(config, out, opts, validate_flag);
    if (app.got_subcommand(val)) return do_simulate(config, out, opts, true);
    if (app.got_subcommand(swp)) return do_sweep(config, out, jobs);
    if (app.got_subcommand(ana))
      return do_analyze(fwhm_files, fringe_files, slope_args, want_prefactor);
    if (app.got_subcommand(pre)) {
      std::printf("%.6f\n", gemti::resolution_prefactor());
      return 0;
    }
  } catch (const gemti::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const gemti::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
