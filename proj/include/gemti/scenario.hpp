#ifndef GEMTI_SCENARIO_HPP
#define GEMTI_SCENARIO_HPP

#include <optional>
#include <set>
#include <string>

#include <yaml-cpp/yaml.h>

#include "gemti/protocol.hpp"
#include "gemti/waveforms.hpp"

namespace gemti {

// ---------------------------------------------------------------------------
// Scenario file (YAML, strict): every frequency-like key is ordinary MHz and
// converted to rad/us on load; unknown keys are hard errors with line numbers.
// ---------------------------------------------------------------------------
struct InputSpec {
  enum class Kind { TwoPulse, Sine, Gaussian, Tabulated };
  Kind kind = Kind::TwoPulse;
  double center = 10.0;
  double separation = 5.0;
  double width = 1.0;
  double frequency_mhz = 0.2;
  double photon_number = 2.8;
  std::string tabulated_path;  // envelope CSV

  Envelope build(double write_duration, double omega0) const {
    const int n = 4096;
    TimeGrid g(0.0, write_duration / n, n);
    Envelope env;
    switch (kind) {
      case Kind::TwoPulse:
        env = waveforms::two_pulse(g, center, separation, width, omega0);
        break;
      case Kind::Sine:
        env = waveforms::sine(g, center, width, frequency_mhz, omega0);
        break;
      case Kind::Gaussian:
        env = waveforms::gaussian(g, center, width, omega0);
        break;
      case Kind::Tabulated:
        throw InvalidParamsError("tabulated input must be loaded via its CSV path");
    }
    return waveforms::with_photon_number(std::move(env), photon_number);
  }
};

struct Scenario {
  int format_version = 1;
  std::string name = "scenario";
  EnsembleConfig ensemble;
  SequenceTimeline timeline;
  InputSpec input;
  DetectionModel detection;
  int shots = 1000;
  SolverSettings solver;
  std::set<std::string> outputs;  // envelope_csv, kspace_map, histogram_csv, summary_json
  bool delta0_auto = true;
  double omega0 = omega0_from_wavelength_nm(795.0);
};

namespace detail_yaml {

inline int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

inline void require_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                         const std::string& path) {
  if (!node.IsMap()) throw ConfigError("'" + path + "' must be a mapping", line_of(node));
  for (const auto& kv : node) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k))
      throw ConfigError("unknown key '" + k + "' in '" + path + "'", line_of(kv.first));
  }
}

inline double num(const YAML::Node& n, const std::string& path) {
  if (!n || !n.IsScalar()) throw ConfigError("'" + path + "' must be a number", n ? line_of(n) : 0);
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + path + "' is not a valid number", line_of(n));
  }
}

inline double num_or(const YAML::Node& n, const std::string& path, double fallback) {
  return n ? num(n, path) : fallback;
}

inline std::string str(const YAML::Node& n, const std::string& path) {
  if (!n || !n.IsScalar()) throw ConfigError("'" + path + "' must be a string", n ? line_of(n) : 0);
  return n.as<std::string>();
}

}  // namespace detail_yaml

inline Scenario parse_scenario(const YAML::Node& root) {
  using namespace detail_yaml;
  Scenario sc;
  require_keys(root, {"format_version", "name", "ensemble", "sequence", "input",
                      "detection", "solver", "outputs", "wavelength_nm"},
               "scenario");
  if (!root["format_version"])
    throw ConfigError("missing required key 'format_version'");
  sc.format_version = static_cast<int>(num(root["format_version"], "format_version"));
  if (sc.format_version != 1)
    throw ConfigError("unsupported format_version " + std::to_string(sc.format_version),
                      line_of(root["format_version"]));
  if (root["name"]) sc.name = str(root["name"], "name");
  if (root["wavelength_nm"])
    sc.omega0 = omega0_from_wavelength_nm(num(root["wavelength_nm"], "wavelength_nm"));

  // ensemble
  const YAML::Node en = root["ensemble"];
  if (!en) throw ConfigError("missing required section 'ensemble'");
  require_keys(en, {"od", "gamma_mhz", "delta_mhz", "delta0_mhz", "density"}, "ensemble");
  sc.ensemble.od = num(en["od"], "ensemble.od");
  sc.ensemble.gamma = mhz(num(en["gamma_mhz"], "ensemble.gamma_mhz"));
  sc.ensemble.delta = mhz(num(en["delta_mhz"], "ensemble.delta_mhz"));
  if (en["delta0_mhz"] && !(en["delta0_mhz"].IsScalar() &&
                            en["delta0_mhz"].as<std::string>() == "auto")) {
    sc.ensemble.delta0 = mhz(num(en["delta0_mhz"], "ensemble.delta0_mhz"));
    sc.delta0_auto = false;
  }
  const YAML::Node de = en["density"];
  if (!de) throw ConfigError("missing 'ensemble.density'", line_of(en));
  require_keys(de, {"kind", "order", "fwhm_cm", "length_cm"}, "ensemble.density");
  const std::string kind = str(de["kind"], "ensemble.density.kind");
  const double L = num(de["length_cm"], "ensemble.density.length_cm");
  try {
    if (kind == "uniform") {
      sc.ensemble.density = DensityProfile::uniform(L);
    } else if (kind == "super_gaussian") {
      sc.ensemble.density = DensityProfile::super_gaussian(
          L, num(de["fwhm_cm"], "ensemble.density.fwhm_cm"),
          static_cast<int>(num_or(de["order"], "ensemble.density.order", 4)));
    } else {
      throw ConfigError("unknown density kind '" + kind + "'", line_of(de["kind"]));
    }
  } catch (const InvalidParamsError& e) {
    throw ConfigError(e.what(), line_of(de));
  }

  // sequence
  const YAML::Node sq = root["sequence"];
  if (!sq) throw ConfigError("missing required section 'sequence'");
  require_keys(sq, {"gradient", "write", "hold", "read"}, "sequence");
  const YAML::Node gr = sq["gradient"];
  if (!gr) throw ConfigError("missing 'sequence.gradient'", line_of(sq));
  require_keys(gr, {"beta_mhz_per_cm", "ramp_us", "slew_limit_mhz_per_cm_per_us",
                    "settling_lag_us"},
               "sequence.gradient");
  sc.timeline.beta = mhz(num(gr["beta_mhz_per_cm"], "sequence.gradient.beta_mhz_per_cm"));
  sc.timeline.slew_limit =
      mhz(num_or(gr["slew_limit_mhz_per_cm_per_us"],
                 "sequence.gradient.slew_limit_mhz_per_cm_per_us", 0.5));
  sc.timeline.settling_lag =
      num_or(gr["settling_lag_us"], "sequence.gradient.settling_lag_us", 0.0);

  const YAML::Node wr = sq["write"];
  if (!wr) throw ConfigError("missing 'sequence.write'", line_of(sq));
  require_keys(wr, {"duration_us", "rabi_mhz", "chirp_mhz_per_us", "chirp_ref_us"},
               "sequence.write");
  sc.timeline.write.duration = num(wr["duration_us"], "sequence.write.duration_us");
  sc.timeline.write.rabi = mhz(num(wr["rabi_mhz"], "sequence.write.rabi_mhz"));
  sc.timeline.write.alpha = mhz(num_or(wr["chirp_mhz_per_us"],
                                       "sequence.write.chirp_mhz_per_us", 0.0));
  sc.timeline.write.chirp_t_ref = num_or(wr["chirp_ref_us"], "sequence.write.chirp_ref_us",
                                         sc.timeline.write.duration / 2.0);

  const YAML::Node ho = sq["hold"];
  if (!ho) throw ConfigError("missing 'sequence.hold'", line_of(sq));
  require_keys(ho, {"duration_us", "ssm"}, "sequence.hold");
  sc.timeline.hold.duration = num(ho["duration_us"], "sequence.hold.duration_us");
  sc.timeline.hold.ramp = std::min(num_or(gr["ramp_us"], "sequence.gradient.ramp_us", 7.0),
                                   sc.timeline.hold.duration);
  if (ho["ssm"]) {
    const YAML::Node sm = ho["ssm"];
    require_keys(sm, {"coefficient_rad_per_cm2", "duration_us", "mode", "at_us"},
                 "sequence.hold.ssm");
    SsmPulse p;
    p.duration = num_or(sm["duration_us"], "sequence.hold.ssm.duration_us", 3.0);
    p.t_apply = num_or(sm["at_us"], "sequence.hold.ssm.at_us",
                       sc.timeline.write.duration + sc.timeline.hold.duration / 2.0);
    const bool auto_coeff =
        !sm["coefficient_rad_per_cm2"] ||
        (sm["coefficient_rad_per_cm2"].IsScalar() &&
         sm["coefficient_rad_per_cm2"].as<std::string>() == "auto");
    if (auto_coeff) {
      if (sc.timeline.write.alpha == 0.0)
        throw ConfigError("ssm coefficient 'auto' requires a nonzero write chirp",
                          line_of(sm));
      p.parabolic_coefficient =
          ssm_parabolic_coefficient(sc.timeline.beta, sc.timeline.write.alpha);
    } else {
      p.parabolic_coefficient =
          num(sm["coefficient_rad_per_cm2"], "sequence.hold.ssm.coefficient_rad_per_cm2");
    }
    if (sm["mode"]) {
      const std::string m = str(sm["mode"], "sequence.hold.ssm.mode");
      if (m == "instantaneous")
        p.mode = SsmPulse::Mode::Instantaneous;
      else if (m == "distributed")
        p.mode = SsmPulse::Mode::Distributed;
      else
        throw ConfigError("unknown ssm mode '" + m + "'", line_of(sm["mode"]));
    }
    sc.timeline.hold.ssm.push_back(p);
  }

  const YAML::Node rd = sq["read"];
  if (!rd) throw ConfigError("missing 'sequence.read'", line_of(sq));
  require_keys(rd, {"duration_us", "rabi_mhz", "chirped"}, "sequence.read");
  sc.timeline.read.duration = num(rd["duration_us"], "sequence.read.duration_us");
  sc.timeline.read.rabi = mhz(num(rd["rabi_mhz"], "sequence.read.rabi_mhz"));
  if (rd["chirped"] && rd["chirped"].as<bool>()) {
    sc.timeline.read.alpha = sc.timeline.write.alpha;
    sc.timeline.read.chirp_t_ref =
        sc.timeline.read_start() + sc.timeline.echo_centroid();
  }

  // input
  const YAML::Node in = root["input"];
  if (!in) throw ConfigError("missing required section 'input'");
  require_keys(in, {"kind", "center_us", "separation_us", "width_us", "frequency_mhz",
                    "photon_number", "path"},
               "input");
  const std::string ik = str(in["kind"], "input.kind");
  if (ik == "two_pulse")
    sc.input.kind = InputSpec::Kind::TwoPulse;
  else if (ik == "sine")
    sc.input.kind = InputSpec::Kind::Sine;
  else if (ik == "gaussian")
    sc.input.kind = InputSpec::Kind::Gaussian;
  else if (ik == "tabulated")
    sc.input.kind = InputSpec::Kind::Tabulated;
  else
    throw ConfigError("unknown input kind '" + ik + "'", line_of(in["kind"]));
  sc.input.center = num_or(in["center_us"], "input.center_us",
                           sc.timeline.write.duration / 2.0);
  sc.input.separation = num_or(in["separation_us"], "input.separation_us", 5.0);
  sc.input.width = num_or(in["width_us"], "input.width_us", 1.0);
  sc.input.frequency_mhz = num_or(in["frequency_mhz"], "input.frequency_mhz", 0.2);
  sc.input.photon_number = num_or(in["photon_number"], "input.photon_number", 2.8);
  if (in["path"]) sc.input.tabulated_path = str(in["path"], "input.path");

  // detection
  if (const YAML::Node dt = root["detection"]) {
    require_keys(dt, {"path_transmission", "detector_efficiency", "noise_mean_per_tau",
                      "bin_width_us", "seed", "shots"},
                 "detection");
    sc.detection.path_transmission =
        num_or(dt["path_transmission"], "detection.path_transmission", 0.60);
    sc.detection.detector_efficiency =
        num_or(dt["detector_efficiency"], "detection.detector_efficiency", 0.65);
    sc.detection.noise_mean_per_tau =
        num_or(dt["noise_mean_per_tau"], "detection.noise_mean_per_tau", 0.023);
    sc.detection.bin_width = num_or(dt["bin_width_us"], "detection.bin_width_us", 0.5);
    sc.detection.rng_seed =
        static_cast<std::uint64_t>(num_or(dt["seed"], "detection.seed", 1));
    sc.shots = static_cast<int>(num_or(dt["shots"], "detection.shots", 1000));
  }

  // solver
  if (const YAML::Node so = root["solver"]) {
    require_keys(so, {"nz", "dt_us", "snapshot_interval_us", "scheme"}, "solver");
    sc.solver.nz = static_cast<int>(num_or(so["nz"], "solver.nz", 512));
    if (so["dt_us"] && !(so["dt_us"].IsScalar() && so["dt_us"].as<std::string>() == "auto"))
      sc.solver.dt = num(so["dt_us"], "solver.dt_us");
    sc.solver.snapshot_interval =
        num_or(so["snapshot_interval_us"], "solver.snapshot_interval_us", 0.5);
    if (so["scheme"]) {
      const std::string s = str(so["scheme"], "solver.scheme");
      if (s == "exponential_midpoint")
        sc.solver.scheme = SolverSettings::Scheme::ExponentialMidpoint;
      else if (s == "explicit_rk4")
        sc.solver.scheme = SolverSettings::Scheme::ExplicitRk4;
      else
        throw ConfigError("unknown solver scheme '" + s + "'", line_of(so["scheme"]));
    }
  }
  sc.solver.bandwidth_target = std::abs(sc.timeline.beta) * sc.ensemble.density.length;

  if (const YAML::Node ou = root["outputs"]) {
    if (!ou.IsSequence()) throw ConfigError("'outputs' must be a list", line_of(ou));
    const std::set<std::string> known = {"envelope_csv", "kspace_map", "histogram_csv",
                                         "summary_json"};
    for (const auto& o : ou) {
      const std::string v = o.as<std::string>();
      if (!known.count(v)) throw ConfigError("unknown output '" + v + "'", line_of(o));
      sc.outputs.insert(v);
    }
  } else {
    sc.outputs = {"envelope_csv", "summary_json"};
  }

  // resolve delta0 = -delta_acS at the write-stage Rabi
  if (sc.delta0_auto)
    sc.ensemble.delta0 = -ac_stark_shift(sc.timeline.write.rabi, sc.ensemble.delta,
                                         sc.ensemble.gamma);

  // cross-validation with exception-to-config-error mapping
  try {
    sc.ensemble.validate();
    sc.timeline.validate();
    sc.timeline.control();
    sc.timeline.gradient();
    sc.solver.validate();
    sc.detection.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what(), line_of(root));
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open scenario file: " + path);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.msg, e.mark.line + 1);
  }
  return parse_scenario(root);
}

// Sweep specification: ensemble + grid of (rabi, beta) and the backend choice.
struct SweepSpec {
  std::string name = "sweep";
  EnsembleConfig ensemble;
  std::vector<double> rabi;  // rad/us
  std::vector<double> beta;  // rad/us/cm
  bool analytic_backend = true;
};

inline SweepSpec load_sweep(const std::string& path) {
  using namespace detail_yaml;
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("cannot open sweep file: " + path);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("YAML parse error: ") + e.msg, e.mark.line + 1);
  }
  require_keys(root, {"format_version", "name", "ensemble", "sweep"}, "sweep file");
  if (!root["format_version"]) throw ConfigError("missing required key 'format_version'");
  if (root["format_version"].as<int>() != 1)
    throw ConfigError("unsupported format_version", line_of(root["format_version"]));
  SweepSpec sp;
  if (root["name"]) sp.name = str(root["name"], "name");
  const YAML::Node en = root["ensemble"];
  if (!en) throw ConfigError("missing required section 'ensemble'");
  require_keys(en, {"od", "gamma_mhz", "delta_mhz", "density"}, "ensemble");
  sp.ensemble.od = num(en["od"], "ensemble.od");
  sp.ensemble.gamma = mhz(num(en["gamma_mhz"], "ensemble.gamma_mhz"));
  sp.ensemble.delta = mhz(num(en["delta_mhz"], "ensemble.delta_mhz"));
  const YAML::Node de = en["density"];
  if (!de) throw ConfigError("missing 'ensemble.density'", line_of(en));
  require_keys(de, {"kind", "order", "fwhm_cm", "length_cm"}, "ensemble.density");
  const std::string kind = str(de["kind"], "ensemble.density.kind");
  const double L = num(de["length_cm"], "ensemble.density.length_cm");
  if (kind == "uniform")
    sp.ensemble.density = DensityProfile::uniform(L);
  else if (kind == "super_gaussian")
    sp.ensemble.density = DensityProfile::super_gaussian(
        L, num(de["fwhm_cm"], "ensemble.density.fwhm_cm"),
        static_cast<int>(num_or(de["order"], "ensemble.density.order", 4)));
  else
    throw ConfigError("unknown density kind '" + kind + "'", line_of(de["kind"]));
  const YAML::Node sw = root["sweep"];
  if (!sw) throw ConfigError("missing required section 'sweep'");
  require_keys(sw, {"rabi_mhz", "beta_mhz_per_cm", "backend"}, "sweep");
  if (!sw["rabi_mhz"] || !sw["rabi_mhz"].IsSequence())
    throw ConfigError("'sweep.rabi_mhz' must be a list", line_of(sw));
  for (const auto& v : sw["rabi_mhz"]) sp.rabi.push_back(mhz(v.as<double>()));
  if (!sw["beta_mhz_per_cm"] || !sw["beta_mhz_per_cm"].IsSequence())
    throw ConfigError("'sweep.beta_mhz_per_cm' must be a list", line_of(sw));
  for (const auto& v : sw["beta_mhz_per_cm"]) sp.beta.push_back(mhz(v.as<double>()));
  if (sp.rabi.empty() || sp.beta.empty())
    throw ConfigError("sweep grid must be nonempty", line_of(sw));
  if (sw["backend"]) {
    const std::string b = str(sw["backend"], "sweep.backend");
    if (b == "analytic")
      sp.analytic_backend = true;
    else if (b == "solver")
      sp.analytic_backend = false;
    else
      throw ConfigError("unknown sweep backend '" + b + "'", line_of(sw["backend"]));
  }
  sp.ensemble.validate();
  return sp;
}

}  // namespace gemti

#endif
