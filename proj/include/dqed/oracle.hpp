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

namespace dqed {

enum class Window { None, Hann };

// Rates are linear, in GHz (Gamma / 2pi).
struct OracleConfig {
  double t_total = 1000.0;           // ns
  double dt = 0.0;                   // ns; 0 picks the step from the frame's fastest frequency
  double thermal_population = 0.07;  // both modes
  std::vector<double> decay_rates;      // per level n -> n+1; empty means (n+1) * 0.2 MHz
  std::vector<double> dephasing_rates;  // per level; empty means 0.1 MHz
  double resonator_decay = 2e-4;
  bool rotating_frame = true;
  Window window = Window::Hann;
  int samples_per_period = 0;  // 0 picks enough to resolve the qubit band
  bool harmonic_transmon = false;  // drop the nonlinear terms (free-oscillator checks)

  void validate(int dim_q) const;
};

struct Peak {
  double center = 0.0;
  double width = 0.0;
  double amplitude = 0.0;
};

struct SpectrumResult {
  std::vector<double> freqs;  // GHz, lab frame, ascending
  std::vector<double> power;  // max = 1
  std::vector<Peak> peaks;    // sorted by center
  double resolution = 0.0;    // 1 / record length, GHz
  double dt = 0.0;            // integrator step used, ns
  int samples_per_period = 0;
};

SpectrumResult absorption_spectrum(const DeviceParams& p, const DriveParams& d, const OracleConfig& cfg);

// Largest |Tr rho - 1| while propagating the thermal state for cfg.t_total.
double trace_drift(const DeviceParams& p, const DriveParams& d, const OracleConfig& cfg);

std::vector<Peak> fit_lorentzians(const SpectrumResult& s, int n_peaks);

// Peak with the largest amplitude at positive frequency.
Peak main_peak(const SpectrumResult& s);

// Two-column text (GHz, power) plus a JSON sidecar at path + ".peaks.json".
void write_spectrum(const std::string& path, const SpectrumResult& s);

}  // namespace dqed
