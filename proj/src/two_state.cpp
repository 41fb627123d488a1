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

#include "dqed/two_state.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqed/errors.hpp"

namespace dqed {

namespace {

// Scaled residual (1 - xi) - (omega0 / Omega) J1(2 Omega xi / omega_d).
double scaled_residual(double xi, double amp, double wd, double w0) {
  return (1.0 - xi) - (w0 / amp) * std::cyl_bessel_j(1.0, 2.0 * amp * xi / wd);
}

double scaled_slope(double xi, double amp, double wd, double w0) {
  const double x = 2.0 * amp * xi / wd;
  const double dj1 = 0.5 * (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x));
  return -1.0 - (w0 / amp) * dj1 * (2.0 * amp / wd);
}

DeviceParams pseudo_device(const TsParams& ts, int dim_r) {
  DeviceParams p;
  p.dim_q = 2;
  p.dim_r = dim_r;
  p.omega_r = ts.omega_r;
  p.g = ts.g_ts;
  p.ej = 0.0;
  p.ec = 0.0;
  return p;
}

CoupledKamiltonian rabi_model(double qubit, double omega_r, double g, int dim_r, const TsParams& ts) {
  if (dim_r < 2) throw ConfigError("dim_r must be >= 2");
  Matrix sx = Matrix::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  Matrix sz = Matrix::Zero(2, 2);
  sz(1, 1) = qubit;
  Matrix a = ladder(dim_r, BasisKind::ResonatorFock).data();
  Matrix h = kron(sz, Matrix::Identity(dim_r, dim_r)) +
             kron(Matrix::Identity(2, 2), omega_r * (a.adjoint() * a)) + g * kron(sx, a + a.adjoint());
  CoupledKamiltonian k;
  k.model = Model::TS;
  k.device = pseudo_device(ts, dim_r);
  k.dressing = eigh_assigned(h);
  Matrix r = h * k.dressing.vectors - k.dressing.vectors * k.dressing.values.cast<cplx>().asDiagonal();
  k.reconstruction_residual = max_abs(r) / std::max(1.0, max_abs(h));
  RVector e = k.dressing.values_by_label();
  k.energies = Eigen::MatrixXd::Zero(2, dim_r);
  for (int nq = 0; nq < 2; ++nq)
    for (int nr = 0; nr < dim_r; ++nr) k.energies(nq, nr) = e(nq * dim_r + nr);
  k.energies.array() -= k.energies(0, 0);
  extract_spectrum(k);
  return k;
}

}  // namespace

double xi_residual(double xi, double omega_amp, double omega_d, double omega0) {
  return omega_amp * (1.0 - xi) - omega0 * std::cyl_bessel_j(1.0, 2.0 * omega_amp * xi / omega_d);
}

double solve_xi_ts(double omega_amp, double omega_d, double omega0) {
  if (!(omega_d > 0)) throw DomainError("omega_d must be positive");
  if (omega_amp < 0) throw DomainError("omega_amp must be non-negative");
  if (omega_amp == 0.0) return omega_d / (omega_d + omega0);

  double lo = 0.0, hi = 1.0;
  double flo = scaled_residual(lo, omega_amp, omega_d, omega0);
  double fhi = scaled_residual(hi, omega_amp, omega_d, omega0);
  if (flo * fhi > 0) throw SolverError("no root of the xi equation in (0, 1)");
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = scaled_residual(mid, omega_amp, omega_d, omega0);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double xi = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double f = scaled_residual(xi, omega_amp, omega_d, omega0);
    double s = scaled_slope(xi, omega_amp, omega_d, omega0);
    if (s == 0.0) break;
    double next = xi - f / s;
    if (!(next > 0.0 && next < 1.0)) break;
    if (next == xi) break;
    xi = next;
  }
  return xi;
}

double ts_effective_coupling(double g_ts, double theta) {
  double c = std::cos(0.5 * theta);
  return g_ts * c * c;
}

TsDressed ts_dressed(const TsParams& ts, double omega_d, double omega_amp, TsAmplitude amp) {
  TsDressed out;
  out.xi_ts = solve_xi_ts(omega_amp, omega_d, ts.omega0_ts);
  const double x = 2.0 * omega_amp * out.xi_ts / omega_d;
  out.omega0_bar = ts.omega0_ts * std::cyl_bessel_j(0.0, x);
  out.omega_bar_d = 2.0 * ts.omega0_ts * std::cyl_bessel_j(1.0, x);
  const double a = amp == TsAmplitude::Literal ? omega_amp : out.omega_bar_d;
  const double det = out.omega0_bar - omega_d;
  out.theta = std::atan2(a, det);
  if (out.theta < 0) out.theta += std::numbers::pi;
  out.delta = std::hypot(det, a);
  const bool red = det >= 0.0;
  out.omega_tilde = omega_d + (red ? out.delta : -out.delta);
  const double branch = red ? out.theta : std::numbers::pi - out.theta;
  out.g_eff = ts_effective_coupling(ts.g_ts, branch);
  return out;
}

CoupledKamiltonian ts_undriven(const TsParams& ts, int dim_r) {
  return rabi_model(ts.omega0_ts, ts.omega_r, ts.g_ts, dim_r, ts);
}

TsParams calibrate_ts(double target_omega_q0, double target_omega_r0, double target_chi_qr,
                      double omega_r, int dim_r) {
  const double chi = std::abs(target_chi_qr);
  const double step = 1e-4;
  const double tol = 1e-5;
  TsParams ts;
  ts.omega_r = omega_r;
  {
    const double det = target_omega_q0 - target_omega_r0;
    const double sum = target_omega_q0 + target_omega_r0;
    const double g0 = std::sqrt(chi * std::abs(det) / 2.0);
    ts.g_ts = g0;
    ts.omega0_ts = target_omega_q0 - (det != 0.0 ? g0 * g0 / det : 0.0) - g0 * g0 / sum;
  }

  auto residual = [&](const TsParams& t) {
    CoupledKamiltonian k;
    try {
      k = ts_undriven(t, dim_r);
    } catch (const std::exception& e) {
      throw CalibrationError(std::string("two-state calibration failed: ") + e.what(), {NAN, NAN, NAN});
    }
    return Eigen::Vector2d(k.omega_q0 - target_omega_q0, std::abs(k.chi_qr) - chi);
  };

  double res_r = 0.0;
  Eigen::Vector2d r = residual(ts);
  for (int outer = 0; outer < 40; ++outer) {
    for (int it = 0; it < 60; ++it) {
      r = residual(ts);
      if (r.cwiseAbs().maxCoeff() < 1e-10) break;
      Eigen::Matrix2d jac;
      for (int c = 0; c < 2; ++c) {
        TsParams up = ts, dn = ts;
        (c == 0 ? up.omega0_ts : up.g_ts) += step;
        (c == 0 ? dn.omega0_ts : dn.g_ts) -= step;
        jac.col(c) = (residual(up) - residual(dn)) / (2 * step);
      }
      Eigen::Vector2d dx = jac.fullPivLu().solve(-r);
      double lambda = 1.0;
      bool improved = false;
      for (int ls = 0; ls < 20; ++ls) {
        TsParams trial = ts;
        trial.omega0_ts += lambda * dx(0);
        trial.g_ts = std::abs(trial.g_ts + lambda * dx(1));
        if (residual(trial).norm() < r.norm()) {
          ts = trial;
          improved = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!improved) break;
    }
    CoupledKamiltonian k = ts_undriven(ts, dim_r);
    res_r = k.omega_r0 - target_omega_r0;
    r = residual(ts);
    if (std::abs(res_r) < 1e-10 && r.cwiseAbs().maxCoeff() < 1e-10) break;
    ts.omega_r -= res_r;
  }
  r = residual(ts);
  res_r = ts_undriven(ts, dim_r).omega_r0 - target_omega_r0;
  if (std::abs(res_r) > tol || r.cwiseAbs().maxCoeff() > tol)
    throw CalibrationError("two-state calibration did not converge", {r(0), res_r, r(1)});
  return ts;
}

CoupledKamiltonian compute_k_ts(const TsParams& ts, double omega_d, double omega_amp, int dim_r, TsAmplitude amp) {
  TsDressed dr = ts_dressed(ts, omega_d, omega_amp, amp);
  return rabi_model(dr.omega_tilde, ts.omega_r, dr.g_eff, dim_r, ts);
}

DipoleMatrices ts_dipole_matrices(const TsParams& ts, double omega_d, double omega_amp, TsAmplitude amp) {
  TsDressed dr = ts_dressed(ts, omega_d, omega_amp, amp);
  const double a = amp == TsAmplitude::Literal ? omega_amp : dr.omega_bar_d;
  Matrix h0 = Matrix::Zero(2, 2), drive = Matrix::Zero(2, 2);
  h0(1, 1) = dr.omega0_bar - omega_d;
  drive(0, 1) = drive(1, 0) = 0.5 * a;
  Matrix w = eigh_tracked(h0, drive).vectors_by_label();
  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  Matrix n = Matrix::Zero(2, 2);
  n(0, 0) = 1.0;
  n(1, 1) = std::sqrt(2.0);
  DipoleMatrices dm;
  dm.d_minus = w.adjoint() * lower * w;
  dm.d_plus = w.adjoint() * lower.adjoint() * w;
  dm.n_tilde = w.adjoint() * n * w;
  return dm;
}

}  // namespace dqed
