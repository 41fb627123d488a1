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

#include <string>
#include <vector>

#include "dqed/device.hpp"
#include "dqed/operator.hpp"

namespace dqed {

enum class Model { Full, K1, K2, TS, RWA };

std::string model_name(Model m);
Model parse_model(const std::string& name);

struct TransmonKamiltonian {
  double omega_q_tilde = 0.0;
  std::vector<double> a_tilde;  // a4, a6, ... up to cosine_order / 2
  EigenDecomposition dressing;
  DriveParams drive;
  RVector energies;  // dressed energies by bare label, frame restored
  DeviceParams device;
};

struct DipoleMatrices {
  Matrix d_plus;
  Matrix d_minus;
  Matrix n_tilde;
};

// Diagonal corrections a_{2n,2m} multiplying (a^dag)^n a^n (b^dag)^m b^m, n + m = 3.
// NaN when the truncation cannot resolve the coefficient.
struct HigherOrder {
  double a60 = 0.0;
  double a42 = 0.0;
  double a24 = 0.0;
  double a06 = 0.0;
};

struct CoupledKamiltonian {
  double omega_q0 = 0.0;
  double omega_r0 = 0.0;
  double chi_q0 = 0.0;
  double chi_qr = 0.0;
  double chi_r0 = 0.0;
  HigherOrder higher;
  Model model = Model::Full;
  EigenDecomposition dressing;
  Eigen::MatrixXd energies;  // (n_q, n_r) -> dressed energy relative to |0,0>
  std::vector<std::string> warnings;
  DeviceParams device;
  double reconstruction_residual = 0.0;
};

TransmonKamiltonian compute_kq(const DeviceParams& p, const DriveParams& d);

// Same construction from explicit bare levels and ladder elements in their eigenbasis.
TransmonKamiltonian kq_from_levels(const RVector& energies, const Matrix& b, const DeviceParams& p,
                                   const DriveParams& d);
DipoleMatrices compute_dipole_matrices(const DeviceParams& p, const DriveParams& d);

CoupledKamiltonian compute_k(const DeviceParams& p, const DriveParams& d);
CoupledKamiltonian compute_k1(const DeviceParams& p, const DriveParams& d);
CoupledKamiltonian compute_k2(const DeviceParams& p, const DriveParams& d);

TransmonKamiltonian compute_kq_rwa(const DeviceParams& p, const DriveParams& d);
CoupledKamiltonian compute_k_rwa(const DeviceParams& p, const DriveParams& d);
DipoleMatrices compute_dipole_matrices_rwa(const DeviceParams& p, const DriveParams& d);

// Undriven transmon-resonator eigenvalues using the full dipole (no filtering).
CoupledKamiltonian undriven_joint(const DeviceParams& p);

// Fills the spectral fields of k from energies labelled (n_q, n_r).
void extract_spectrum(CoupledKamiltonian& k);

struct ApproximationReport {
  double kq_filter = 0.0;           // |Sigma_qd/Delta_qd| * |b01 / b10|
  double drive_cr = 0.0;            // g^2 / (2 wq |Delta_rd|)
  double drive_cr_inverse = 0.0;    // 2 wq |Delta_rd Sigma_qd| / (g^2 |Delta_qd|)
  double xi3_ratio = 0.0;           // g xi3 / |Delta_rd|
  double rwa_qd = 0.0;              // |Sigma_qd / Delta_qd|
  double rwa_qr = 0.0;              // |Sigma_qr / Delta_qr|
  double alpha_ratio = 0.0;         // alpha4 / wq
  double omega_q_used = 0.0;
  double omega_r_used = 0.0;
};

ApproximationReport approximation_report(const DeviceParams& p, const DriveParams& d);

}  // namespace dqed
