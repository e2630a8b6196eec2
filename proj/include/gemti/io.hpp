#ifndef GEMTI_IO_HPP
#define GEMTI_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gemti/metrics.hpp"
#include "gemti/protocol.hpp"
#include "gemti/wigner.hpp"

namespace gemti {
namespace io {

using json = nlohmann::json;

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path.string());
  f << text;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------
inline void write_envelope_csv(const std::filesystem::path& path, const Envelope& env) {
  std::string s;
  s += "# gemti envelope, omega0_rad_per_s=" + fmt(env.omega0) + "\n";
  s += "t_us,re_amplitude_sqrtphot_per_sqrtus,im_amplitude_sqrtphot_per_sqrtus\n";
  for (int i = 0; i < env.grid.n; ++i)
    s += fmt(env.grid.t(i)) + "," + fmt(env.samples[i].real()) + "," +
         fmt(env.samples[i].imag()) + "\n";
  write_text(path, s);
}

inline Envelope read_envelope_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open: " + path.string());
  std::string line;
  double omega0 = omega0_from_wavelength_nm(795.0);
  std::vector<double> t;
  std::vector<cplx> a;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("omega0_rad_per_s=");
      if (pos != std::string::npos) omega0 = std::stod(line.substr(pos + 17));
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-') continue;
    double tv, re, im;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &tv, &re, &im) == 3) {
      t.push_back(tv);
      a.emplace_back(re, im);
    }
  }
  if (t.size() < 2) throw Error("envelope csv has fewer than 2 samples: " + path.string());
  const double dt = t[1] - t[0];
  return Envelope(TimeGrid(t[0], dt, static_cast<int>(t.size())), std::move(a), omega0);
}

inline void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& sp) {
  std::string s;
  s += "# gemti spectrum, omega0_rad_per_s=" + fmt(sp.omega0) + "\n";
  s += "omega_rad_per_us,re_amplitude,im_amplitude\n";
  for (int i = 0; i < sp.n(); ++i)
    s += fmt(sp.omega(i)) + "," + fmt(sp.samples[i].real()) + "," +
         fmt(sp.samples[i].imag()) + "\n";
  write_text(path, s);
}

inline void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  std::string s = "bin_start_us,counts,expected_lambda_per_shot\n";
  for (std::size_t i = 0; i < h.bin_start.size(); ++i)
    s += fmt(h.bin_start[i]) + "," + std::to_string(h.counts[i]) + "," +
         fmt(h.lambda_per_shot[i]) + "\n";
  write_text(path, s);
}

inline Histogram read_histogram_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open: " + path.string());
  Histogram h;
  std::string line;
  while (std::getline(f, line)) {
    double b, lam;
    unsigned long long c;
    if (std::sscanf(line.c_str(), "%lf,%llu,%lf", &b, &c, &lam) == 3) {
      h.bin_start.push_back(b);
      h.counts.push_back(c);
      h.lambda_per_shot.push_back(lam);
    }
  }
  if (h.bin_start.size() >= 2) h.bin_width = h.bin_start[1] - h.bin_start[0];
  return h;
}

// long format: bandwidth, tau, mean efficiency
inline void write_map_csv(const std::filesystem::path& path, const EfficiencyMap& m) {
  std::string s = "bandwidth_rad_per_us,tau_us,mean_efficiency\n";
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      s += fmt(m.b_at(i, j)) + "," + fmt(m.tau[i]) + "," + fmt(m.eta_at(i, j)) + "\n";
  write_text(path, s);
}

// ---------------------------------------------------------------------------
// JSON metadata + flat float64 binary, for large maps
// ---------------------------------------------------------------------------
inline void write_matrix_binary(const std::filesystem::path& base, const json& meta,
                                std::span<const double> values) {
  json m = meta;
  m["format"] = "gemti-map-v1";
  m["dtype"] = "float64";
  m["byte_order"] = "little_endian";
  m["data_file"] = base.filename().string() + ".bin";
  write_text(base.string() + ".json", m.dump(2) + "\n");
  std::ofstream f(base.string() + ".bin", std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + base.string() + ".bin");
  f.write(reinterpret_cast<const char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
}

inline void write_wigner(const std::filesystem::path& base, const WignerMap& w) {
  json meta;
  meta["description"] = "chronocyclic Wigner map W(t, omega), row-major in t";
  meta["shape"] = {w.t_axis.n, w.n_omega};
  meta["row_axis"] = {{"name", "t"}, {"unit", "us"}, {"start", w.t_axis.t0}, {"step", w.t_axis.dt}};
  meta["col_axis"] = {{"name", "omega"}, {"unit", "rad/us"}, {"start", w.omega_min}, {"step", w.domega}};
  meta["marginal_normalization"] = w.normalization;
  write_matrix_binary(base, meta, w.values);
}

// (time x K_z) evolution matrix from coherence snapshots, Fig-3(d,f) layout
inline void write_kspace_map(const std::filesystem::path& base,
                             const std::vector<std::pair<double, CoherenceField>>& snaps) {
  if (snaps.empty()) throw Error("write_kspace_map: no snapshots recorded");
  const int nk = snaps.front().second.grid.n;
  std::vector<double> values;
  values.reserve(snaps.size() * nk);
  Spectrum first;
  for (const auto& [t, field] : snaps) {
    const Spectrum sp = snapshot_kspace(field);
    if (values.empty()) first = sp;
    for (int k = 0; k < sp.n(); ++k) values.push_back(std::norm(sp.samples[k]));
  }
  json meta;
  meta["description"] = "|S(K_z)|^2 evolution, row-major in time";
  meta["shape"] = {static_cast<int>(snaps.size()), nk};
  meta["row_axis"] = {{"name", "t"},
                      {"unit", "us"},
                      {"start", snaps.front().first},
                      {"step", snaps.size() > 1 ? snaps[1].first - snaps[0].first : 0.0}};
  meta["col_axis"] = {{"name", "K_z"}, {"unit", "rad/cm"}, {"start", first.omega_min}, {"step", first.domega}};
  write_matrix_binary(base, meta, values);
}

inline void write_map_binary(const std::filesystem::path& base, const EfficiencyMap& m) {
  json meta;
  meta["description"] = "time-frequency averaged efficiency over (rabi, beta) grid";
  meta["shape"] = {m.rows(), m.cols()};
  meta["rabi_rad_per_us"] = m.rabi;
  meta["beta_rad_per_us_cm"] = m.beta;
  meta["tau_us"] = m.tau;
  meta["bandwidth_rad_per_us"] = m.bandwidth;
  write_matrix_binary(base, meta, m.eta_bar);
}

}  // namespace io
}  // namespace gemti

#endif
