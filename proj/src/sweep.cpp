// Copyright 2025 dressedqed contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dqed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "dqed/errors.hpp"

namespace dqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::vector<double> number_list(const json& j, const std::string& key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) throw ConfigError("'" + key + "' must be a list");
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw ConfigError("'" + key + "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void check_ladder(const std::vector<double>& v, const std::string& what) {
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError(what + " must be strictly increasing");
  if (!v.empty() && v.front() < 0) throw ConfigError(what + " must be non-negative");
  if (!v.empty() && v.front() != 0.0) throw ConfigError(what + " must include 0");
}

int error_code_of(const std::exception& e) {
  if (dynamic_cast<const DegeneracyError*>(&e)) return kDegenerate;
  if (dynamic_cast<const CalibrationError*>(&e)) return kCalibration;
  if (dynamic_cast<const SolverError*>(&e) || dynamic_cast<const StabilityError*>(&e)) return kSolver;
  if (dynamic_cast<const DomainError*>(&e)) return kDomain;
  return kOther;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Per-model quantities at one drive point.
struct ModelPoint {
  double omega_q0 = 0.0;
  double uncoupled = 0.0;  // dressed qubit frequency without the resonator
  CoupledKamiltonian k;
  DipoleMatrices dm;
};

struct Context {
  const SweepConfig* cfg = nullptr;
  std::optional<TsParams> ts;
  std::string ts_error;
  int ts_error_code = kOk;
};

ModelPoint evaluate(const Context& ctx, Model m, double omega_d, double amp, double lamb_shift) {
  const SweepConfig& cfg = *ctx.cfg;
  const DeviceParams& p = cfg.device;
  ModelPoint out;
  DriveParams d = drive_constants(p, omega_d, amp);
  switch (m) {
    case Model::Full:
    case Model::K1:
    case Model::K2: {
      out.k = m == Model::Full ? compute_k(p, d) : (m == Model::K1 ? compute_k1(p, d) : compute_k2(p, d));
      out.uncoupled = compute_kq(p, d).omega_q_tilde;
      if (std::isfinite(lamb_shift)) out.dm = dipole_matrices_n0(p, omega_d, amp, lamb_shift);
      break;
    }
    case Model::RWA: {
      out.k = compute_k_rwa(p, d);
      out.uncoupled = compute_kq_rwa(p, d).omega_q_tilde;
      if (std::isfinite(lamb_shift))
        out.dm = compute_dipole_matrices_rwa(p, drive_constants(p, omega_d - lamb_shift, amp));
      break;
    }
    case Model::TS: {
      if (!ctx.ts) throw CalibrationError(ctx.ts_error, {});
      out.k = compute_k_ts(*ctx.ts, omega_d, amp, cfg.ts_dim_r, cfg.ts_amplitude);
      out.uncoupled = ts_dressed(*ctx.ts, omega_d, amp, cfg.ts_amplitude).omega_tilde;
      if (std::isfinite(lamb_shift))
        out.dm = ts_dipole_matrices(*ctx.ts, omega_d - lamb_shift, amp, cfg.ts_amplitude);
      break;
    }
  }
  out.omega_q0 = out.k.omega_q0;
  return out;
}

SweepRow compute_row(const Context& ctx, Model m, double omega_d, double amp, const std::optional<Peak>& peak,
                     bool oracle_uncoupled) {
  const SweepConfig& cfg = *ctx.cfg;
  SweepRow row;
  row.omega_d = omega_d;
  row.omega_amp = amp;
  row.model = m;
  row.oracle_peak_ghz = peak ? peak->center : kNaN;
  try {
    if (std::isnan(amp)) throw CalibrationError("amplitude calibration failed for this drive frequency", {});
    ModelPoint base = evaluate(ctx, m, omega_d, 0.0, kNaN);
    const double lamb = base.k.omega_q0 - base.uncoupled;
    base = evaluate(ctx, m, omega_d, 0.0, lamb);
    ModelPoint cur = evaluate(ctx, m, omega_d, amp, lamb);
    RenormalizedSpectrumReport rep = spectrum_report(cur.k, base.k, cur.uncoupled, base.uncoupled);
    row.stark_mhz = rep.stark * 1e3;
    row.lamb_ratio = rep.lamb_ratio;
    row.chiqr_ratio = rep.chiqr_ratio;
    row.rabi_ratio = rabi_frequency(cur.dm, cfg.gamma) / rabi_frequency(base.dm, cfg.gamma);
    CoherenceTimes ct = coherence_times(cur.dm, cfg.psd, cur.omega_q0, omega_d);
    CoherenceTimes ct0 = coherence_times(base.dm, cfg.psd, base.omega_q0, omega_d);
    row.t1_ratio = ct.t1 / ct0.t1;
    row.t2_ratio = ct.t2 / ct0.t2;
    if (peak) {
      const double predicted = oracle_uncoupled ? cur.uncoupled : cur.omega_q0;
      row.residual_mhz = std::abs(predicted - peak->center) * 1e3;
    } else {
      row.residual_mhz = kNaN;
    }
  } catch (const std::exception& e) {
    row.error_code = error_code_of(e);
    row.message = e.what();
    row.stark_mhz = row.lamb_ratio = row.chiqr_ratio = row.rabi_ratio = kNaN;
    row.t1_ratio = row.t2_ratio = row.residual_mhz = kNaN;
  }
  return row;
}

}  // namespace

SweepConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  SweepConfig cfg;
  cfg.raw = j;
  if (j.contains("device")) {
    const json& d = j["device"];
    cfg.device.ej = d.value("ej", cfg.device.ej);
    cfg.device.ec = d.value("ec", cfg.device.ec);
    cfg.device.omega_r = d.value("omega_r", cfg.device.omega_r);
    cfg.device.g = d.value("g", cfg.device.g);
    cfg.device.dim_q = d.value("dim_q", cfg.device.dim_q);
    cfg.device.dim_r = d.value("dim_r", cfg.device.dim_r);
    cfg.device.cosine_order = d.value("cosine_order", cfg.device.cosine_order);
  }
  cfg.device.validate(false);

  const json drive = j.value("drive", json::object());
  cfg.drive_frequencies = number_list(drive, "frequencies");
  cfg.drive_amplitudes = number_list(drive, "amplitudes");
  cfg.stark_targets = number_list(drive, "stark_targets");
  if (cfg.drive_frequencies.empty()) throw ConfigError("drive.frequencies is empty");
  for (double f : cfg.drive_frequencies)
    if (!(f > 0)) throw ConfigError("drive frequencies must be positive");
  if (cfg.stark_targets.empty() && cfg.drive_amplitudes.empty())
    throw ConfigError("give drive.amplitudes or drive.stark_targets");
  if (!cfg.stark_targets.empty() && !cfg.drive_amplitudes.empty())
    throw ConfigError("drive.amplitudes and drive.stark_targets are exclusive");
  check_ladder(cfg.drive_amplitudes, "drive.amplitudes");
  check_ladder(cfg.stark_targets, "drive.stark_targets");

  if (!j.contains("models") || !j["models"].is_array() || j["models"].empty())
    throw ConfigError("at least one model must be selected");
  for (const auto& m : j["models"]) {
    if (!m.is_string()) throw ConfigError("models must be strings");
    Model model = parse_model(m.get<std::string>());
    if (std::find(cfg.models.begin(), cfg.models.end(), model) != cfg.models.end())
      throw ConfigError("model listed twice: " + m.get<std::string>());
    cfg.models.push_back(model);
  }
  if (!cfg.stark_targets.empty() && std::find(cfg.models.begin(), cfg.models.end(), Model::Full) == cfg.models.end())
    throw ConfigError("stark_targets need the Full model");

  cfg.outputs = j.value("outputs", cfg.outputs);
  cfg.seed = j.value("seed", 0u);

  const json ts = j.value("ts", json::object());
  const std::string amp = ts.value("amplitude", std::string("literal"));
  if (amp == "literal") cfg.ts_amplitude = TsAmplitude::Literal;
  else if (amp == "renormalized") cfg.ts_amplitude = TsAmplitude::Renormalized;
  else throw ConfigError("ts.amplitude must be 'literal' or 'renormalized'");
  cfg.ts_dim_r = ts.value("dim_r", cfg.ts_dim_r);
  if (cfg.ts_dim_r < 2) throw ConfigError("ts.dim_r must be >= 2");

  cfg.gamma = j.value("rabi", json::object()).value("gamma", 1.0);

  const json psd = j.value("psd", json::object());
  cfg.psd_kind = psd.value("kind", std::string("flat"));
  if (cfg.psd_kind == "flat") {
    cfg.psd = NoisePsd::flat(psd.value("s_perp", 1.0), psd.value("s_par_zero", 1.0));
  } else if (cfg.psd_kind == "quadratic") {
    std::vector<double> c = number_list(psd, "coeffs");
    if (c.size() != 3) throw ConfigError("psd.coeffs needs three numbers");
    cfg.psd.coeffs = {c[0], c[1], c[2]};
    cfg.psd.s_par_zero = psd.value("s_par_zero", 1.0);
  } else if (cfg.psd_kind == "fit") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& pt : psd.value("points", json::array())) {
      if (!pt.is_array() || pt.size() != 2) throw ConfigError("psd.points entries are [omega, t1_ratio]");
      pts.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
    try {
      cfg.psd = fit_noise_psd(pts, psd.value("omega_ref", kNaN));
    } catch (const Error& e) {
      throw ConfigError(std::string("psd fit: ") + e.what());
    }
    cfg.psd.s_par_zero = psd.value("s_par_zero", 1.0);
  } else {
    throw ConfigError("psd.kind must be flat, quadratic or fit");
  }

  if (j.contains("oracle") && j["oracle"].value("enabled", true)) {
    const json& o = j["oracle"];
    OracleSweep os;
    os.dim_q = o.value("dim_q", os.dim_q);
    os.dim_r = o.value("dim_r", os.dim_r);
    os.cfg.t_total = o.value("t_total", os.cfg.t_total);
    os.cfg.dt = o.value("dt", os.cfg.dt);
    os.cfg.thermal_population = o.value("thermal_population", os.cfg.thermal_population);
    os.cfg.decay_rates = number_list(o, "decay_rates");
    os.cfg.dephasing_rates = number_list(o, "dephasing_rates");
    os.cfg.resonator_decay = o.value("resonator_decay", os.cfg.resonator_decay);
    os.cfg.rotating_frame = o.value("rotating_frame", true);
    const std::string w = o.value("window", std::string("hann"));
    if (w == "hann") os.cfg.window = Window::Hann;
    else if (w == "none") os.cfg.window = Window::None;
    else throw ConfigError("oracle.window must be 'hann' or 'none'");
    DeviceParams od = cfg.device;
    od.dim_q = os.dim_q;
    od.dim_r = os.dim_r;
    od.validate(true);
    os.cfg.validate(os.dim_q);
    cfg.oracle = os;
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

int worker_count() {
  if (const char* env = std::getenv("DQED_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> amplitude_calibration(const SweepConfig& cfg, double omega_d,
                                          const std::vector<double>& target_stark) {
  if (std::find(cfg.models.begin(), cfg.models.end(), Model::Full) == cfg.models.end())
    throw ConfigError("amplitude calibration needs the Full model");
  const DeviceParams& p = cfg.device;
  const double base = compute_k(p, drive_constants(p, omega_d, 0.0)).omega_q0;
  auto shift = [&](double amp) { return std::abs(compute_k(p, drive_constants(p, omega_d, amp)).omega_q0 - base); };

  std::vector<double> out;
  for (double target : target_stark) {
    target = std::abs(target);
    if (target == 0.0) {
      out.push_back(0.0);
      continue;
    }
    double lo = 0.0, flo = 0.0;
    double hi = 1e-3, fhi = shift(hi);
    std::vector<double> trail{0.0, 0.0, hi, fhi};
    while (fhi < target) {
      if (fhi < flo - 1e-10)
        throw CalibrationError("stark shift is not monotone in the drive amplitude", trail);
      lo = hi;
      flo = fhi;
      hi *= 2.0;
      if (hi > 2.0 * omega_d) throw CalibrationError("target stark shift out of reach", trail);
      fhi = shift(hi);
      trail.push_back(hi);
      trail.push_back(fhi);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = shift(mid);
      constexpr double noise = 1e-10;  // eigensolver floor on ~10 GHz level energies
      if (fm < flo - noise || fm > fhi + noise)
        throw CalibrationError("stark shift is not monotone inside the bracket", {lo, flo, mid, fm, hi, fhi});
      if (fm < target) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<SweepRow> compute_rows(const SweepConfig& cfg, int workers) {
  Context ctx;
  ctx.cfg = &cfg;
  if (std::find(cfg.models.begin(), cfg.models.end(), Model::TS) != cfg.models.end()) {
    try {
      CoupledKamiltonian und = compute_k(cfg.device, drive_constants(cfg.device, 1.0, 0.0));
      ctx.ts = calibrate_ts(und.omega_q0, und.omega_r0, und.chi_qr, cfg.device.omega_r, cfg.ts_dim_r);
    } catch (const std::exception& e) {
      ctx.ts_error = e.what();
    }
  }

  // amplitudes per drive frequency
  std::vector<std::vector<double>> amps(cfg.drive_frequencies.size());
  for (size_t i = 0; i < cfg.drive_frequencies.size(); ++i) {
    if (cfg.stark_targets.empty()) {
      amps[i] = cfg.drive_amplitudes;
      continue;
    }
    try {
      amps[i] = amplitude_calibration(cfg, cfg.drive_frequencies[i], cfg.stark_targets);
    } catch (const std::exception&) {
      amps[i].assign(cfg.stark_targets.size(), kNaN);
      amps[i][0] = 0.0;
    }
  }

  struct Task {
    double omega_d, amp;
    size_t first_row;
  };
  std::vector<Task> tasks;
  size_t nrows = 0;
  for (size_t i = 0; i < cfg.drive_frequencies.size(); ++i)
    for (double a : amps[i]) {
      tasks.push_back({cfg.drive_frequencies[i], a, nrows});
      nrows += cfg.models.size();
    }
  std::vector<SweepRow> rows(nrows);

  auto run_task = [&](const Task& t) {
    std::optional<Peak> peak;
    std::string oracle_error;
    int oracle_code = kOk;
    const bool oracle_uncoupled = cfg.oracle && cfg.oracle->dim_r == 1;
    if (cfg.oracle && std::isfinite(t.amp)) {
      try {
        DeviceParams od = cfg.device;
        od.dim_q = cfg.oracle->dim_q;
        od.dim_r = cfg.oracle->dim_r;
        SpectrumResult s = absorption_spectrum(od, drive_constants(od, t.omega_d, t.amp), cfg.oracle->cfg);
        peak = main_peak(s);
      } catch (const std::exception& e) {
        oracle_error = e.what();
        oracle_code = error_code_of(e);
      }
    }
    for (size_t m = 0; m < cfg.models.size(); ++m) {
      SweepRow row = compute_row(ctx, cfg.models[m], t.omega_d, t.amp, peak, oracle_uncoupled);
      if (oracle_code != kOk && row.error_code == kOk) {
        row.error_code = oracle_code;
        row.message = "oracle: " + oracle_error;
      }
      rows[t.first_row + m] = row;
    }
  };

  workers = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (const Task& t : tasks) run_task(t);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next++; i < tasks.size(); i = next++) run_task(tasks[i]);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string format_rows(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "omega_d_ghz,omega_amp_ghz,model,stark_mhz,lamb_ratio,chiqr_ratio,rabi_ratio,t1_ratio,t2_ratio,"
        "oracle_peak_ghz,residual_mhz,error_code\n";
  for (const SweepRow& r : rows)
    os << fmt(r.omega_d) << ',' << fmt(r.omega_amp) << ',' << model_name(r.model) << ',' << fmt(r.stark_mhz) << ','
       << fmt(r.lamb_ratio) << ',' << fmt(r.chiqr_ratio) << ',' << fmt(r.rabi_ratio) << ',' << fmt(r.t1_ratio)
       << ',' << fmt(r.t2_ratio) << ',' << fmt(r.oracle_peak_ghz) << ',' << fmt(r.residual_mhz) << ','
       << r.error_code << '\n';
  return os.str();
}

int run_sweep(const SweepConfig& cfg, int workers) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<SweepRow> rows = compute_rows(cfg, workers);
  auto t1 = std::chrono::steady_clock::now();

  std::error_code ec;
  fs::create_directories(cfg.outputs, ec);
  if (ec) return 2;
  {
    std::ofstream out(fs::path(cfg.outputs) / "results.csv");
    if (!out) return 2;
    out << format_rows(rows);
    if (!out) return 2;
  }
  json manifest;
  manifest["tool"] = "dqed";
  manifest["version"] = kVersion;
  manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION);
  manifest["compiler"] = __VERSION__;
  manifest["config"] = cfg.raw;
  manifest["workers"] = workers;
  manifest["rows"] = rows.size();
  manifest["seconds"] = std::chrono::duration<double>(t1 - t0).count();
  json errors = json::array();
  for (const SweepRow& r : rows)
    if (r.error_code != kOk)
      errors.push_back({{"omega_d_ghz", r.omega_d}, {"omega_amp_ghz", r.omega_amp}, {"model", model_name(r.model)},
                        {"error_code", r.error_code}, {"message", r.message}});
  manifest["errors"] = errors;
  std::ofstream mf(fs::path(cfg.outputs) / "manifest.json");
  if (!mf) return 2;
  mf << manifest.dump(2) << '\n';
  return mf ? 0 : 2;
}

std::string report(const std::string& results_path) {
  std::ifstream in(results_path);
  if (!in) throw IoError("cannot read " + results_path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty results file " + results_path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  auto col = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("results file lacks column " + name);
    return static_cast<size_t>(it - header.begin());
  };
  const size_t c_model = col("model"), c_res = col("residual_mhz"), c_err = col("error_code"),
               c_stark = col("stark_mhz"), c_wd = col("omega_d_ghz");

  struct Stats {
    size_t rows = 0, errors = 0, residuals = 0;
    double max_res = 0.0, max_stark = 0.0;
  };
  std::map<std::string, Stats> by_model;
  std::map<double, double> worst_by_wd;
  size_t total = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ConfigError("malformed results row: " + line);
    ++total;
    Stats& s = by_model[cells[c_model]];
    ++s.rows;
    if (std::stoi(cells[c_err]) != 0) ++s.errors;
    const double res = std::strtod(cells[c_res].c_str(), nullptr);
    const double stark = std::strtod(cells[c_stark].c_str(), nullptr);
    if (std::isfinite(stark)) s.max_stark = std::max(s.max_stark, std::abs(stark));
    if (std::isfinite(res)) {
      ++s.residuals;
      s.max_res = std::max(s.max_res, res);
      const double wd = std::strtod(cells[c_wd].c_str(), nullptr);
      worst_by_wd[wd] = std::max(worst_by_wd[wd], res);
    }
  }
  std::ostringstream os;
  os << "rows: " << total << '\n';
  for (const auto& [name, s] : by_model) {
    os << name << ": rows " << s.rows << ", errors " << s.errors << ", max |stark| " << fmt(s.max_stark) << " MHz";
    if (s.residuals) os << ", max residual " << fmt(s.max_res) << " MHz";
    os << '\n';
  }
  for (const auto& [wd, r] : worst_by_wd) os << "omega_d " << fmt(wd) << " GHz: max residual " << fmt(r) << " MHz\n";
  return os.str();
}

}  // namespace dqed
