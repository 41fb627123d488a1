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

#include "dqed/observables.hpp"

#include <cmath>
#include <numbers>

#include "dqed/errors.hpp"

namespace dqed {

RenormalizedSpectrumReport spectrum_report(const CoupledKamiltonian& driven, const CoupledKamiltonian& baseline,
                                           double omega_q_tilde, double omega_q) {
  RenormalizedSpectrumReport r;
  r.model = driven.model;
  r.stark = driven.omega_q0 - baseline.omega_q0;
  r.lamb_ratio = (driven.omega_q0 - omega_q_tilde) / (baseline.omega_q0 - omega_q);
  r.chiqr_ratio = driven.chi_qr / baseline.chi_qr;
  return r;
}

RenormalizedSpectrumReport spectrum_report(const CoupledKamiltonian& driven, const CoupledKamiltonian& baseline,
                                           const TransmonKamiltonian& uncoupled,
                                           const TransmonKamiltonian& uncoupled_baseline) {
  if (!(driven.device == baseline.device) || !(driven.device == uncoupled.device) ||
      !(uncoupled.device == uncoupled_baseline.device))
    throw ContractViolation("spectrum_report inputs were built from different device parameters");
  if (driven.model != baseline.model) throw ContractViolation("spectrum_report: model mismatch");
  return spectrum_report(driven, baseline, uncoupled.omega_q_tilde, uncoupled_baseline.omega_q_tilde);
}

NoisePsd NoisePsd::flat(double s_perp, double s_par_zero) {
  NoisePsd psd;
  psd.coeffs = {s_perp, 0.0, 0.0};
  psd.s_par_zero = s_par_zero;
  return psd;
}

double NoisePsd::s_perp(double omega) const {
  if (!std::isfinite(omega) || omega > domain_hi) throw DomainError("noise PSD evaluated outside its domain");
  if (omega < 0) return 0.0;
  double s = coeffs[0] + coeffs[1] * omega + coeffs[2] * omega * omega;
  if (!std::isfinite(s) || s < 0) throw DomainError("noise PSD is negative or undefined at the requested frequency");
  return s;
}

double rabi_frequency(const DipoleMatrices& dm, double gamma) { return gamma * std::abs(dm.d_minus(0, 1)); }

CoherenceTimes coherence_times(const DipoleMatrices& dm, const NoisePsd& psd, double omega_q_tilde0,
                               double omega_d) {
  const double pi = std::numbers::pi;
  const double d01 = std::abs(dm.d_minus(0, 1));
  const double dn = std::abs(dm.n_tilde(1, 1) - dm.n_tilde(0, 0));
  const double dd = std::abs(dm.d_minus(1, 1) - dm.d_minus(0, 0));
  const double rate1 = pi * psd.s_perp(omega_q_tilde0) * d01 * d01;
  const double rate_phi = pi * (psd.s_par_zero * dn * dn + psd.s_perp(omega_d) * dd * dd);
  CoherenceTimes out;
  out.t1 = 1.0 / rate1;
  out.t_phi = 1.0 / rate_phi;
  out.t2 = 1.0 / (0.5 * rate1 + rate_phi);
  if (psd.s_par) {
    const double n01 = std::abs(dm.n_tilde(0, 1));
    out.neglected_rate = pi * psd.s_par(omega_q_tilde0 - omega_d) * n01 * n01;
  }
  return out;
}

NoisePsd fit_noise_psd(const std::vector<std::pair<double, double>>& points, double omega_ref) {
  if (points.size() < 3) throw InsufficientDataError("fit_noise_psd needs at least 3 points");
  double center = 0.0;
  for (const auto& pt : points) center += pt.first;
  center /= static_cast<double>(points.size());

  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = points[i].first - center;
    if (!(points[i].second > 0)) throw DomainError("T1 ratios must be positive");
    a(i, 0) = 1.0;
    a(i, 1) = x;
    a(i, 2) = x * x;
    y(i) = 1.0 / points[i].second;
  }
  Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  // back to powers of omega
  NoisePsd psd;
  psd.coeffs = {c(0) - c(1) * center + c(2) * center * center, c(1) - 2.0 * c(2) * center, c(2)};
  if (std::isfinite(omega_ref)) {
    const double s = psd.coeffs[0] + psd.coeffs[1] * omega_ref + psd.coeffs[2] * omega_ref * omega_ref;
    if (!(s > 0)) throw DomainError("fitted PSD is not positive at the reference frequency");
    for (double& v : psd.coeffs) v /= s;
  }
  return psd;
}

DipoleMatrices dipole_matrices_n0(const DeviceParams& p, double omega_d, double omega_amp, double lamb_shift) {
  return compute_dipole_matrices(p, drive_constants(p, omega_d - lamb_shift, omega_amp));
}

}  // namespace dqed
