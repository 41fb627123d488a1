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

// dqed: batch sweeps over drive parameters.
//
//   dqed run <config.json>
//   dqed calibrate <config.json> --stark 0,0.01,0.02
//   dqed report <results.csv>
//
// Exit codes: 0 success, 1 config error, 2 IO error.

#include <cstdio>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dqed/errors.hpp"
#include "dqed/sweep.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const dqed::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 2;
  } catch (const dqed::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven transmon-resonator spectra and renormalized observables"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a sweep described by a JSON config");
  run->add_option("config", run_config, "Config file")->required();

  std::string cal_config;
  std::vector<double> targets;
  auto* cal = app.add_subcommand("calibrate", "Drive amplitudes reaching given |Stark shifts| (GHz)");
  cal->add_option("config", cal_config, "Config file")->required();
  cal->add_option("--stark", targets, "Target |Stark shifts| in GHz")->delimiter(',')->required();

  std::string results;
  auto* rep = app.add_subcommand("report", "Summarize a results table");
  rep->add_option("results", results, "results.csv from a run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    return guarded([&] {
      dqed::SweepConfig cfg = dqed::load_config(run_config);
      const int workers = dqed::worker_count();
      int code = dqed::run_sweep(cfg, workers);
      if (code == 0) std::cout << "wrote " << cfg.outputs << "/results.csv\n";
      else std::cerr << "io error: could not write results under " << cfg.outputs << '\n';
      return code;
    });
  }
  if (*cal) {
    return guarded([&] {
      dqed::SweepConfig cfg = dqed::load_config(cal_config);
      nlohmann::json out = nlohmann::json::object();
      for (double wd : cfg.drive_frequencies) {
        std::vector<double> amps = dqed::amplitude_calibration(cfg, wd, targets);
        char key[32];
        std::snprintf(key, sizeof key, "%.6g", wd);
        out[key] = amps;
      }
      std::cout << out.dump(2) << '\n';
      return 0;
    });
  }
  return guarded([&] {
    std::cout << dqed::report(results);
    return 0;
  });
}
