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

#include "dqed/operator.hpp"

namespace dqed {

// All frequencies are linear, in GHz (value = omega / 2pi).
struct DeviceParams {
  double ej = 28.6;
  double ec = 0.149;
  double omega_r = 4.334;
  double g = 0.245;
  int dim_q = 12;
  int dim_r = 4;
  int cosine_order = 6;

  // dim_r == 1 is accepted only for transmon-only work (allow_bare_transmon).
  void validate(bool allow_bare_transmon = false) const;
  bool operator==(const DeviceParams&) const = default;
};

struct DriveParams {
  double omega_d = 0.0;
  double omega_amp = 0.0;
  double zeta = 0.0;
  double xi = 0.0;
  double omega_bar = 0.0;
};

// sqrt(8 EJ EC): coefficient of b^dag b in the oscillator-basis Hamiltonian.
double harmonic_frequency(const DeviceParams& p);

// Zero-point phase amplitude (2 EC / EJ)^(1/4).
double phase_zpf(const DeviceParams& p);

// Transmon Hamiltonian in the oscillator Fock basis, shifted so its ground
// energy is zero. harmonic_only drops every term beyond the quadratic one.
Operator build_bare_transmon(const DeviceParams& p, bool harmonic_only = false);

// Eigen-decomposition of the bare transmon, labelled by Fock state.
struct BareTransmon {
  RVector energies;  // by label, relative to ground
  Matrix vectors;    // column n is the state adiabatically tied to Fock |n>
  Matrix b;          // V^dag b V
  Matrix d;          // V^dag (b - b^dag) V
  Matrix phi;        // V^dag (b + b^dag) V
};
BareTransmon bare_transmon(const DeviceParams& p);

DriveParams drive_constants(const DeviceParams& p, double omega_d, double omega_amp);

double map_feedline_drive(const DeviceParams& p, double omega_feed_amp, double omega_d);

}  // namespace dqed
