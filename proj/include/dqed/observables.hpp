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

#pragma once

#include <array>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "dqed/kamiltonian.hpp"

namespace dqed {

struct RenormalizedSpectrumReport {
  double stark = 0.0;  // GHz, signed
  double lamb_ratio = 1.0;
  double chiqr_ratio = 1.0;
  Model model = Model::Full;
};

// lamb_ratio uses omega_q_tilde (driven, uncoupled) and omega_q (undriven, uncoupled).
RenormalizedSpectrumReport spectrum_report(const CoupledKamiltonian& driven, const CoupledKamiltonian& baseline,
                                           double omega_q_tilde, double omega_q);

RenormalizedSpectrumReport spectrum_report(const CoupledKamiltonian& driven, const CoupledKamiltonian& baseline,
                                           const TransmonKamiltonian& uncoupled,
                                           const TransmonKamiltonian& uncoupled_baseline);

// Spectral densities in arbitrary units; only ratios are meaningful.
struct NoisePsd {
  std::array<double, 3> coeffs{1.0, 0.0, 0.0};  // c0 + c1 w + c2 w^2
  double s_par_zero = 1.0;
  double domain_hi = std::numeric_limits<double>::infinity();
  std::function<double(double)> s_par;  // optional, used only to size the neglected term

  static NoisePsd flat(double s_perp, double s_par_zero);
  double s_perp(double omega) const;
};

struct CoherenceTimes {
  double t1 = 0.0;
  double t_phi = 0.0;
  double t2 = 0.0;
  double neglected_rate = 0.0;  // pi S_par(w - wd) |n01|^2, zero when s_par is absent
};

double rabi_frequency(const DipoleMatrices& dm, double gamma);

CoherenceTimes coherence_times(const DipoleMatrices& dm, const NoisePsd& psd, double omega_q_tilde0,
                               double omega_d);

// Points are (omega, T1_driven / T1_undriven). With far-detuned data the
// dipole barely moves, so S(w)/S(w_ref) = 1 / ratio; the fit is made on that
// and normalized to 1 at omega_ref when omega_ref is given.
NoisePsd fit_noise_psd(const std::vector<std::pair<double, double>>& points,
                       double omega_ref = std::numeric_limits<double>::quiet_NaN());

// Dipole matrices in the n_r = 0 manifold: the drive frequency is shifted by
// minus the undriven Lamb shift before dressing.
DipoleMatrices dipole_matrices_n0(const DeviceParams& p, double omega_d, double omega_amp, double lamb_shift);

}  // namespace dqed
