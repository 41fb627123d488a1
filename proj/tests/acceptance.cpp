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

// Acceptance run: one PASS/FAIL line per criterion, details indented below it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dqed/errors.hpp"
#include "dqed/kamiltonian.hpp"
#include "dqed/observables.hpp"
#include "dqed/oracle.hpp"
#include "dqed/sweep.hpp"
#include "dqed/two_state.hpp"

using namespace dqed;

namespace {

const std::vector<double> kDriveGrid = {3.3, 5.89, 6.5, 10.0};

struct Outcome {
  bool pass = false;
  std::vector<std::string> notes;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool within(double value, double expect, double rel) { return std::abs(value / expect - 1.0) <= rel; }

// Smallest amplitude with shift(amp) = target, by doubling then bisection.
double invert_monotone(const std::function<double(double)>& shift, double target) {
  if (target == 0.0) return 0.0;
  double lo = 0.0, hi = 1e-3;
  while (shift(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 50.0) throw CalibrationError("target out of reach", {target});
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shift(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double kq_amplitude(const DeviceParams& p, double wd, double target) {
  const double w0 = bare_transmon(p).energies(1);
  return invert_monotone(
      [&](double a) { return std::abs(compute_kq(p, drive_constants(p, wd, a)).omega_q_tilde - w0); }, target);
}

using CoupledFn = std::function<CoupledKamiltonian(const DeviceParams&, const DriveParams&)>;

double coupled_amplitude(const DeviceParams& p, double wd, double target, const CoupledFn& f) {
  const double w0 = f(p, drive_constants(p, wd, 0.0)).omega_q0;
  return invert_monotone([&](double a) { return std::abs(f(p, drive_constants(p, wd, a)).omega_q0 - w0); }, target);
}

RenormalizedSpectrumReport coupled_report(const DeviceParams& p, double wd, double amp, const CoupledFn& f) {
  DriveParams d0 = drive_constants(p, wd, 0.0), d = drive_constants(p, wd, amp);
  return spectrum_report(f(p, d), f(p, d0), compute_kq(p, d), compute_kq(p, d0));
}

// Undriven joint levels with the nearest-neighbour dipole, built here from the bare spectrum.
Eigen::MatrixXd nn_undriven_levels(const DeviceParams& p) {
  BareTransmon bt = bare_transmon(p);
  const int dq = p.dim_q, dr = p.dim_r, dim = dq * dr;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dq; ++i)
    for (int k = 0; k < dr; ++k) h(i * dr + k, i * dr + k) = bt.energies(i) + p.omega_r * k;
  for (int i = 0; i + 1 < dq; ++i)
    for (int k = 0; k + 1 < dr; ++k) {
      const double s = std::sqrt(k + 1.0);
      // g D (a - a^dag), D restricted to |i - j| = 1
      for (auto [a, b] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
        h(a * dr + k, b * dr + k + 1) += p.g * bt.d(a, b) * s;
        h(a * dr + k + 1, b * dr + k) -= p.g * bt.d(a, b) * s;
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::MatrixXd out(dq, dr);
  for (int i = 0; i < dq; ++i)
    for (int k = 0; k < dr; ++k) {
      Eigen::Index best = 0;
      es.eigenvectors().row(i * dr + k).cwiseAbs2().maxCoeff(&best);
      out(i, k) = es.eigenvalues()(best);
    }
  return out.array() - out(0, 0);
}

// ----------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  DeviceParams p;
  ApproximationReport r = approximation_report(p, drive_constants(p, 10.0, 0.1));
  struct Row {
    const char* name;
    double value, expect, rel;
  };
  const Row rows[] = {{"g^2/(2 wq |D_rd|)", r.drive_cr, 8.98e-4, 0.02},
                      {"g xi3/|D_rd|", r.xi3_ratio, 1.03e-3, 0.02},
                      {"2 wq |D_rd S_qd|/(g^2 |D_qd|)", r.drive_cr_inverse, 4300.0, 0.05},
                      {"|S_qd/D_qd|", r.rwa_qd, 3.86, 0.02},
                      {"|S_qr/D_qr|", r.rwa_qr, 6.55, 0.02},
                      {"alpha4/wq", r.alpha_ratio, 0.025, 0.10}};
  o.pass = true;
  for (const Row& row : rows) {
    const bool ok = within(row.value, row.expect, row.rel);
    o.pass = o.pass && ok;
    o.notes.push_back(fmt("%-32s %.5g (expect %.4g +-%g%%) %s", row.name, row.value, row.expect, 100 * row.rel,
                          ok ? "ok" : "MISS"));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  DeviceParams p;
  p.dim_q = 10;
  p.dim_r = 1;
  const std::vector<double> targets = {0.0, 0.02, 0.04};
  struct Point {
    double wd, amp, predicted, peak, bin;
  };
  std::vector<std::future<Point>> jobs;
  for (double wd : kDriveGrid)
    for (double t : targets) {
      const double amp = kq_amplitude(p, wd, t);
      jobs.push_back(std::async(std::launch::async, [p, wd, amp] {
        DriveParams d = drive_constants(p, wd, amp);
        OracleConfig cfg;
        SpectrumResult s = absorption_spectrum(p, d, cfg);
        return Point{wd, amp, compute_kq(p, d).omega_q_tilde, main_peak(s).center, s.resolution};
      }));
    }
  o.pass = true;
  for (auto& j : jobs) {
    Point pt = j.get();
    const double tol = std::max(1e-3, pt.bin);
    const double diff = std::abs(pt.predicted - pt.peak);
    o.pass = o.pass && diff <= tol;
    o.notes.push_back(fmt("wd %5.2f amp %.4f  kq %.6f  oracle %.6f  |diff| %.3f MHz (tol %.3f) %s", pt.wd, pt.amp,
                          pt.predicted, pt.peak, diff * 1e3, tol * 1e3, diff <= tol ? "ok" : "MISS"));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  DeviceParams p;
  const double khz = 1e-6;
  double worst_bare = 0.0, worst_nn = 0.0, worst_coincide = 0.0, worst_rwa = 0.0, worst_ts = 0.0, info_full = 0.0;
  BareTransmon bt = bare_transmon(p);
  Eigen::MatrixXd nn = nn_undriven_levels(p);
  const double nn_wq0 = nn(1, 0), nn_wr0 = nn(0, 1), nn_chi = nn(1, 0) - (nn(1, 1) - nn(0, 1));
  CoupledKamiltonian full = undriven_joint(p);
  TsParams ts = calibrate_ts(full.omega_q0, full.omega_r0, full.chi_qr, p.omega_r);
  CoupledKamiltonian ts_base = ts_undriven(ts, 8);

  // the RWA Hamiltonian at zero drive, assembled here
  Matrix hq = build_bare_transmon(p).data();
  const int dq = p.dim_q, dr = p.dim_r;
  Eigen::MatrixXcd hr = Eigen::MatrixXcd::Zero(dq * dr, dq * dr);
  for (int i = 0; i < dq; ++i)
    for (int k = 0; k < dr; ++k) {
      hr(i * dr + k, i * dr + k) = (hq(i, i) - hq(0, 0)).real() + p.omega_r * k;
      if (i + 1 < dq && k >= 1) {
        const double c = -p.g * std::sqrt((i + 1.0) * k);  // b^dag a: |i,k> -> |i+1,k-1>
        hr((i + 1) * dr + k - 1, i * dr + k) += c;
        hr(i * dr + k, (i + 1) * dr + k - 1) += c;
      }
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> rs(hr);
  auto rwa_level = [&](int i, int k) {
    Eigen::Index best = 0;
    rs.eigenvectors().row(i * dr + k).cwiseAbs2().maxCoeff(&best);
    return rs.eigenvalues()(best);
  };
  const double r00 = rwa_level(0, 0);
  const double rwa_wq0 = rwa_level(1, 0) - r00, rwa_wr0 = rwa_level(0, 1) - r00;
  const double rwa_chi = rwa_wq0 - (rwa_level(1, 1) - rwa_level(0, 1));

  for (double wd : kDriveGrid) {
    DriveParams d = drive_constants(p, wd, 0.0);
    TransmonKamiltonian kq = compute_kq(p, d), kqr = compute_kq_rwa(p, d);
    worst_bare = std::max(worst_bare, std::abs(kq.omega_q_tilde - bt.energies(1)));
    worst_rwa = std::max(worst_rwa, std::abs(kqr.omega_q_tilde - (hq(1, 1) - hq(0, 0)).real()));
    CoupledKamiltonian k = compute_k(p, d), k1 = compute_k1(p, d), k2 = compute_k2(p, d), kr = compute_k_rwa(p, d);
    for (const CoupledKamiltonian* c : {&k, &k1, &k2}) {
      worst_nn = std::max({worst_nn, std::abs(c->omega_q0 - nn_wq0), std::abs(c->omega_r0 - nn_wr0),
                           std::abs(c->chi_qr - nn_chi)});
      worst_coincide = std::max({worst_coincide, std::abs(c->omega_q0 - k.omega_q0), std::abs(c->omega_r0 - k.omega_r0),
                                 std::abs(c->chi_qr - k.chi_qr)});
    }
    info_full = std::max({info_full, std::abs(k.omega_q0 - full.omega_q0), std::abs(k.chi_qr - full.chi_qr)});
    worst_rwa = std::max({worst_rwa, std::abs(kr.omega_q0 - rwa_wq0), std::abs(kr.omega_r0 - rwa_wr0),
                          std::abs(kr.chi_qr - rwa_chi)});
    CoupledKamiltonian kt = compute_k_ts(ts, wd, 0.0, 8);
    worst_ts = std::max({worst_ts, std::abs(kt.omega_q0 - ts_base.omega_q0), std::abs(kt.omega_r0 - ts_base.omega_r0),
                         std::abs(kt.chi_qr - ts_base.chi_qr)});
  }
  o.pass = worst_bare < khz && worst_nn < khz && worst_coincide < khz && worst_rwa < khz && worst_ts < khz;
  o.notes.push_back(fmt("Kq vs bare transmon              %.3g kHz", worst_bare * 1e6));
  o.notes.push_back(fmt("K, K1, K2 vs undriven joint      %.3g kHz", worst_nn * 1e6));
  o.notes.push_back(fmt("K, K1, K2 mutual                 %.3g kHz", worst_coincide * 1e6));
  o.notes.push_back(fmt("RWA vs undriven RWA Hamiltonian  %.3g kHz", worst_rwa * 1e6));
  o.notes.push_back(fmt("TS vs undriven Rabi model        %.3g kHz", worst_ts * 1e6));
  o.notes.push_back(fmt("(info) K vs joint with every dipole element: %.3g kHz", info_full * 1e6));
  return o;
}

Outcome criterion4() {
  Outcome o;
  CoupledKamiltonian full = undriven_joint(DeviceParams{});
  TsParams ts = calibrate_ts(full.omega_q0, full.omega_r0, full.chi_qr, DeviceParams{}.omega_r);
  o.notes.push_back(fmt("calibrated w0 %.6f g %.6f wr %.6f", ts.omega0_ts, ts.g_ts, ts.omega_r));
  double worst_sym = 0.0, lo = 1e9, hi = -1e9;
  CoupledKamiltonian base = compute_k_ts(ts, 5.89, 0.0, 8);
  for (int i = 0; i <= 20; ++i) {
    const double amp = 0.01 * i;
    DipoleMatrices dm = ts_dipole_matrices(ts, 5.89, amp);
    worst_sym = std::max(worst_sym, std::abs(std::abs(dm.d_minus(0, 0)) - std::abs(dm.d_minus(1, 1))));
    if (i == 0) continue;
    RenormalizedSpectrumReport r =
        spectrum_report(compute_k_ts(ts, 5.89, amp, 8), base, ts_dressed(ts, 5.89, amp).omega_tilde, ts.omega0_ts);
    const double q = r.lamb_ratio / r.chiqr_ratio;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  const double spread = (hi - lo) / (0.5 * (hi + lo));
  o.pass = worst_sym < 1e-10 && spread < 0.01;
  o.notes.push_back(fmt("max ||d00| - |d11||  %.3g", worst_sym));
  o.notes.push_back(fmt("(L/L0)/(chi/chi0) in [%.6f, %.6f], relative spread %.3g over amp 0.01..0.2 GHz", lo, hi, spread));
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (double w0 : {5.72, 5.9})
    for (double wd : {3.3, 5.89, 10.0})
      for (double amp : {1e-3, 0.05, 0.2, 0.5}) {
        const double xi = solve_xi_ts(amp, wd, w0);
        worst = std::max(worst, std::abs(xi_residual(xi, amp, wd, w0)));
      }
  const double wd = 5.89, w0 = 5.72;
  const double xi = solve_xi_ts(1e-4 * wd, wd, w0);
  const double rel = std::abs(xi / (wd / (wd + w0)) - 1.0);
  o.pass = worst < 1e-12 && rel < 1e-6;
  o.notes.push_back(fmt("max residual %.3g GHz", worst));
  o.notes.push_back(fmt("small-drive limit relative error %.3g", rel));
  return o;
}

Outcome criterion6() {
  Outcome o;
  DeviceParams p;
  const double l = undriven_joint(p).omega_q0 - bare_transmon(p).energies(1);
  DipoleMatrices dm0 = dipole_matrices_n0(p, 5.89, 0.0, l);
  const double d01 = std::abs(bare_transmon(p).d(0, 1));
  const double s = 0.8;
  CoherenceTimes c = coherence_times(dm0, NoisePsd::flat(s, 0.3), 5.72, 5.89);
  const double rel1 = std::abs((1.0 / c.t1) / (std::numbers::pi * s * d01 * d01) - 1.0);

  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double wd = 3.0 + 8.0 * u(rng), amp = 0.4 * u(rng);
    DipoleMatrices dm = compute_dipole_matrices(p, drive_constants(p, wd, amp));
    NoisePsd psd;
    psd.coeffs = {0.2 + u(rng), u(rng), 0.1 * u(rng)};
    psd.s_par_zero = 0.05 + u(rng);
    CoherenceTimes ct = coherence_times(dm, psd, 5.5 + 0.4 * u(rng), wd);
    const double rhs = 1.0 / (2.0 * ct.t1) + 1.0 / ct.t_phi;
    worst = std::max(worst, std::abs(1.0 / ct.t2 - rhs) / rhs);
  }
  o.pass = rel1 < 1e-9 && worst < 1e-12;
  o.notes.push_back(fmt("undriven 1/T1 relative error %.3g", rel1));
  o.notes.push_back(fmt("T2 identity worst relative error %.3g over 100 points", worst));
  return o;
}

Outcome criterion7() {
  Outcome o;
  DeviceParams p;
  const CoupledFn full = [](const DeviceParams& q, const DriveParams& d) { return compute_k(q, d); };
  const CoupledFn k1 = [](const DeviceParams& q, const DriveParams& d) { return compute_k1(q, d); };

  // (a) 5.89 GHz Full sweep
  bool a = true;
  double prev_l = 1.0, prev_c = 1.0;
  std::string trail;
  for (double t : {0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04}) {
    const double amp = coupled_amplitude(p, 5.89, t, full);
    RenormalizedSpectrumReport r = coupled_report(p, 5.89, amp, full);
    a = a && r.lamb_ratio < 1.0 && r.chiqr_ratio < 1.0 && r.lamb_ratio <= prev_l && r.chiqr_ratio <= prev_c;
    prev_l = r.lamb_ratio;
    prev_c = r.chiqr_ratio;
    trail += fmt(" (%.0f MHz: %.3f, %.3f)", t * 1e3, r.lamb_ratio, r.chiqr_ratio);
  }
  o.notes.push_back(std::string("5.89 GHz Full lamb/chi ratios:") + trail + (a ? " ok" : " MISS"));

  // (b) 3.3 GHz at the sweep maximum
  const double amp33 = coupled_amplitude(p, 3.3, 0.04, full);
  RenormalizedSpectrumReport r33 = coupled_report(p, 3.3, amp33, full);
  const bool b = std::abs(1.0 - r33.lamb_ratio) < 0.1 * std::abs(1.0 - r33.chiqr_ratio);
  o.notes.push_back(fmt("3.3 GHz at 40 MHz (amp %.3f): |1-L| %.4f vs 0.1|1-chi| %.4f (ratio %.3f) %s", amp33,
                        std::abs(1.0 - r33.lamb_ratio), 0.1 * std::abs(1.0 - r33.chiqr_ratio),
                        std::abs(1.0 - r33.lamb_ratio) / std::abs(1.0 - r33.chiqr_ratio), b ? "ok" : "MISS"));

  // (c) K1 against Full at matched Stark shift
  auto deviation = [&](double wd) {
    double worst = 0.0;
    for (double t : {0.01, 0.02, 0.03, 0.04}) {
      RenormalizedSpectrumReport rf = coupled_report(p, wd, coupled_amplitude(p, wd, t, full), full);
      RenormalizedSpectrumReport r1 = coupled_report(p, wd, coupled_amplitude(p, wd, t, k1), k1);
      worst = std::max({worst, std::abs(rf.lamb_ratio - r1.lamb_ratio), std::abs(rf.chiqr_ratio - r1.chiqr_ratio)});
    }
    return worst;
  };
  const double dev10 = deviation(10.0), dev589 = deviation(5.89);
  const bool c = dev10 < 0.02 && dev589 > 5 * 0.02;
  o.notes.push_back(fmt("K1 vs Full max ratio deviation: 10 GHz %.4f (< 0.02), 5.89 GHz %.4f (> 0.1) %s", dev10,
                        dev589, c ? "ok" : "MISS"));
  o.pass = a && b && c;
  return o;
}

Outcome criterion8() {
  Outcome o;
  DeviceParams ref;  // amplitudes from the default truncation
  struct Q {
    double v[6];
  };
  auto quantities = [](const DeviceParams& p, double wd, double amp) {
    DriveParams d = drive_constants(p, wd, amp);
    CoupledKamiltonian k = compute_k(p, d);
    return Q{{k.omega_q0, k.omega_r0, k.chi_qr, k.chi_q0, k.chi_r0, compute_kq(p, d).omega_q_tilde}};
  };
  const char* names[6] = {"omega_q0", "omega_r0", "chi_qr", "chi_q0", "chi_r0", "omega_q_tilde"};
  const CoupledFn full = [](const DeviceParams& q, const DriveParams& d) { return compute_k(q, d); };

  auto dims = [](int dq, int dr) {
    DeviceParams p;
    p.dim_q = dq;
    p.dim_r = dr;
    return p;
  };
  const DeviceParams small = dims(10, 3), large = dims(14, 5), mid = dims(10, 5), r4 = dims(10, 4), big = dims(18, 7);
  double worst[6] = {0}, worst_mid[6] = {0}, worst_r4[6] = {0}, worst_big[6] = {0};
  double residual = 0.0;
  for (double wd : kDriveGrid)
    for (double t : {0.0, 0.02, 0.04}) {
      const double amp = coupled_amplitude(ref, wd, t, full);
      Q a = quantities(small, wd, amp), b = quantities(large, wd, amp), m = quantities(mid, wd, amp),
        c4 = quantities(r4, wd, amp), g = quantities(big, wd, amp);
      for (int i = 0; i < 6; ++i) {
        worst[i] = std::max(worst[i], std::abs(a.v[i] - b.v[i]));
        worst_mid[i] = std::max(worst_mid[i], std::abs(m.v[i] - b.v[i]));
        worst_r4[i] = std::max(worst_r4[i], std::abs(c4.v[i] - b.v[i]));
        worst_big[i] = std::max(worst_big[i], std::abs(g.v[i] - b.v[i]));
      }
      for (const DeviceParams* p : {&small, &large}) {
        DriveParams d = drive_constants(*p, wd, amp);
        residual = std::max({residual, compute_k(*p, d).reconstruction_residual,
                             compute_k1(*p, d).reconstruction_residual, compute_k2(*p, d).reconstruction_residual,
                             compute_k_rwa(*p, d).reconstruction_residual});
      }
    }
  bool conv = true;
  for (int i = 0; i < 6; ++i) {
    conv = conv && worst[i] < 1e-5;
    o.notes.push_back(fmt("%-14s (10,3)->(14,5) %9.3f kHz | (10,4) %8.3f | (10,5) %8.3f | (18,7) %7.3f kHz", names[i],
                          worst[i] * 1e6, worst_r4[i] * 1e6, worst_mid[i] * 1e6, worst_big[i] * 1e6));
  }
  o.notes.push_back(fmt("max eigen-reconstruction residual %.3g", residual));
  o.pass = conv && residual < 1e-9;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "approximation-criteria golden numbers", 1.0, criterion1},
      {2, "oracle equivalence", 600.0, criterion2},
      {3, "adiabatic-limit suite", 10.0, criterion3},
      {4, "two-state structural identities", 30.0, criterion4},
      {5, "CHRW limit", 1.0, criterion5},
      {6, "coherence-formula reductions", 5.0, criterion6},
      {7, "qualitative trends", 300.0, criterion7},
      {8, "numerical robustness", 120.0, criterion8},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = out.pass && in_time;
    failures += !pass;
    std::printf("CRITERION %d %s: %s (%.2f s, budget %.0f s%s)\n", c.id, c.title, pass ? "PASS" : "FAIL", secs,
                c.budget_s, in_time ? "" : ", over budget");
    for (const std::string& n : out.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
