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

#include "dqed/kamiltonian.hpp"

namespace dqed {

struct TsParams {
  double omega0_ts = 0.0;
  double g_ts = 0.0;
  double omega_r = 0.0;
};

// Which amplitude sets the dressed splitting and mixing angle.
enum class TsAmplitude { Literal, Renormalized };

struct TsDressed {
  double xi_ts = 0.0;
  double omega0_bar = 0.0;
  double omega_bar_d = 0.0;
  double theta = 0.0;        // atan2(A, omega0_bar - omega_d), in [0, pi]
  double delta = 0.0;
  double g_eff = 0.0;        // g_ts cos^2 of the angle of the branch tied to the bare qubit
  double omega_tilde = 0.0;  // dressed qubit splitting, frame restored
};

double solve_xi_ts(double omega_amp, double omega_d, double omega0);
double xi_residual(double xi, double omega_amp, double omega_d, double omega0);

double ts_effective_coupling(double g_ts, double theta);

TsDressed ts_dressed(const TsParams& ts, double omega_d, double omega_amp,
                     TsAmplitude amp = TsAmplitude::Literal);

// Undriven qubit + resonator (quantum Rabi model) spectrum.
CoupledKamiltonian ts_undriven(const TsParams& ts, int dim_r);

TsParams calibrate_ts(double target_omega_q0, double target_omega_r0, double target_chi_qr,
                      double omega_r, int dim_r = 8);

CoupledKamiltonian compute_k_ts(const TsParams& ts, double omega_d, double omega_amp, int dim_r,
                                TsAmplitude amp = TsAmplitude::Literal);

DipoleMatrices ts_dipole_matrices(const TsParams& ts, double omega_d, double omega_amp,
                                  TsAmplitude amp = TsAmplitude::Literal);

}  // namespace dqed
