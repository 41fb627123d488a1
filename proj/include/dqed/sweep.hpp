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

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dqed/kamiltonian.hpp"
#include "dqed/observables.hpp"
#include "dqed/oracle.hpp"
#include "dqed/two_state.hpp"

namespace dqed {

struct OracleSweep {
  OracleConfig cfg;
  int dim_q = 10;
  int dim_r = 1;  // 1 runs the transmon-only oracle
};

struct SweepConfig {
  DeviceParams device;
  std::vector<double> drive_frequencies;
  std::vector<double> drive_amplitudes;
  std::vector<double> stark_targets;  // |stark| in GHz; replaces drive_amplitudes when non-empty
  std::vector<Model> models;
  std::optional<OracleSweep> oracle;
  std::string outputs = "out";
  unsigned seed = 0;
  double gamma = 1.0;
  NoisePsd psd;
  std::string psd_kind = "flat";
  TsAmplitude ts_amplitude = TsAmplitude::Literal;
  int ts_dim_r = 8;
  nlohmann::json raw;
};

SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::string& path);

enum ErrorCode { kOk = 0, kDegenerate = 1, kCalibration = 2, kSolver = 3, kDomain = 4, kOther = 5 };

struct SweepRow {
  double omega_d = 0.0;
  double omega_amp = 0.0;
  Model model = Model::Full;
  double stark_mhz = 0.0;
  double lamb_ratio = 0.0;
  double chiqr_ratio = 0.0;
  double rabi_ratio = 0.0;
  double t1_ratio = 0.0;
  double t2_ratio = 0.0;
  double oracle_peak_ghz = 0.0;
  double residual_mhz = 0.0;
  int error_code = kOk;
  std::string message;
};

// Worker count from DQED_WORKERS, else the hardware concurrency.
int worker_count();

std::vector<SweepRow> compute_rows(const SweepConfig& cfg, int workers);
std::string format_rows(const std::vector<SweepRow>& rows);

// Writes results.csv and manifest.json under cfg.outputs. Returns 0, or 2 on IO failure.
int run_sweep(const SweepConfig& cfg, int workers);

// Amplitudes whose Full-model |stark| shift matches each target at omega_d.
std::vector<double> amplitude_calibration(const SweepConfig& cfg, double omega_d,
                                          const std::vector<double>& target_stark);

// Human-readable summary of a results table.
std::string report(const std::string& results_path);

}  // namespace dqed
