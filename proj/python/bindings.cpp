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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "dqed/errors.hpp"
#include "dqed/kamiltonian.hpp"
#include "dqed/observables.hpp"
#include "dqed/oracle.hpp"
#include "dqed/sweep.hpp"
#include "dqed/two_state.hpp"

namespace py = pybind11;
using namespace dqed;

namespace {

SweepConfig config_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(e.what());
  }
  return parse_config(j);
}

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["omega_d"] = r.omega_d;
  d["omega_amp"] = r.omega_amp;
  d["model"] = model_name(r.model);
  d["stark_mhz"] = r.stark_mhz;
  d["lamb_ratio"] = r.lamb_ratio;
  d["chiqr_ratio"] = r.chiqr_ratio;
  d["rabi_ratio"] = r.rabi_ratio;
  d["t1_ratio"] = r.t1_ratio;
  d["t2_ratio"] = r.t2_ratio;
  d["oracle_peak_ghz"] = r.oracle_peak_ghz;
  d["residual_mhz"] = r.residual_mhz;
  d["error_code"] = r.error_code;
  d["message"] = r.message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Driven transmon-resonator spectra";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
  static py::exception<DegeneracyError> degeneracy_error(m, "DegeneracyError", base.ptr());
  static py::exception<CalibrationError> calibration_error(m, "CalibrationError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      config_error(e.what());
    } catch (const DegeneracyError& e) {
      degeneracy_error(e.what());
    } catch (const CalibrationError& e) {
      calibration_error(e.what());
    } catch (const Error& e) {
      base(e.what());
    }
  });

  py::enum_<Model>(m, "Model")
      .value("Full", Model::Full)
      .value("K1", Model::K1)
      .value("K2", Model::K2)
      .value("TS", Model::TS)
      .value("RWA", Model::RWA);

  py::enum_<TsAmplitude>(m, "TsAmplitude")
      .value("Literal", TsAmplitude::Literal)
      .value("Renormalized", TsAmplitude::Renormalized);

  py::class_<DeviceParams>(m, "DeviceParams")
      .def(py::init<>())
      .def_readwrite("ej", &DeviceParams::ej)
      .def_readwrite("ec", &DeviceParams::ec)
      .def_readwrite("omega_r", &DeviceParams::omega_r)
      .def_readwrite("g", &DeviceParams::g)
      .def_readwrite("dim_q", &DeviceParams::dim_q)
      .def_readwrite("dim_r", &DeviceParams::dim_r)
      .def_readwrite("cosine_order", &DeviceParams::cosine_order);

  py::class_<DriveParams>(m, "DriveParams")
      .def_readonly("omega_d", &DriveParams::omega_d)
      .def_readonly("omega_amp", &DriveParams::omega_amp)
      .def_readonly("zeta", &DriveParams::zeta)
      .def_readonly("xi", &DriveParams::xi)
      .def_readonly("omega_bar", &DriveParams::omega_bar);

  m.def("harmonic_frequency", &harmonic_frequency);
  m.def("drive_constants", &drive_constants, py::arg("device"), py::arg("omega_d"), py::arg("omega_amp"));
  m.def("bare_energies", [](const DeviceParams& p) { return Eigen::VectorXd(bare_transmon(p).energies); });

  py::class_<TransmonKamiltonian>(m, "TransmonKamiltonian")
      .def_readonly("omega_q_tilde", &TransmonKamiltonian::omega_q_tilde)
      .def_readonly("a_tilde", &TransmonKamiltonian::a_tilde)
      .def_property_readonly("energies", [](const TransmonKamiltonian& k) { return Eigen::VectorXd(k.energies); });

  py::class_<CoupledKamiltonian>(m, "CoupledKamiltonian")
      .def_readonly("omega_q0", &CoupledKamiltonian::omega_q0)
      .def_readonly("omega_r0", &CoupledKamiltonian::omega_r0)
      .def_readonly("chi_q0", &CoupledKamiltonian::chi_q0)
      .def_readonly("chi_qr", &CoupledKamiltonian::chi_qr)
      .def_readonly("chi_r0", &CoupledKamiltonian::chi_r0)
      .def_readonly("model", &CoupledKamiltonian::model)
      .def_readonly("energies", &CoupledKamiltonian::energies)
      .def_readonly("warnings", &CoupledKamiltonian::warnings)
      .def_readonly("reconstruction_residual", &CoupledKamiltonian::reconstruction_residual);

  py::class_<DipoleMatrices>(m, "DipoleMatrices")
      .def_property_readonly("d_minus", [](const DipoleMatrices& d) { return Eigen::MatrixXcd(d.d_minus); })
      .def_property_readonly("d_plus", [](const DipoleMatrices& d) { return Eigen::MatrixXcd(d.d_plus); })
      .def_property_readonly("n_tilde", [](const DipoleMatrices& d) { return Eigen::MatrixXcd(d.n_tilde); });

  m.def("compute_kq", &compute_kq);
  m.def("compute_kq_rwa", &compute_kq_rwa);
  m.def("compute_dipole_matrices", &compute_dipole_matrices);
  m.def("compute_k", &compute_k);
  m.def("compute_k1", &compute_k1);
  m.def("compute_k2", &compute_k2);
  m.def("compute_k_rwa", &compute_k_rwa);
  m.def("undriven_joint", &undriven_joint);

  py::class_<ApproximationReport>(m, "ApproximationReport")
      .def_readonly("kq_filter", &ApproximationReport::kq_filter)
      .def_readonly("drive_cr", &ApproximationReport::drive_cr)
      .def_readonly("drive_cr_inverse", &ApproximationReport::drive_cr_inverse)
      .def_readonly("xi3_ratio", &ApproximationReport::xi3_ratio)
      .def_readonly("rwa_qd", &ApproximationReport::rwa_qd)
      .def_readonly("rwa_qr", &ApproximationReport::rwa_qr)
      .def_readonly("alpha_ratio", &ApproximationReport::alpha_ratio);
  m.def("approximation_report", &approximation_report);

  py::class_<TsParams>(m, "TsParams")
      .def(py::init([](double w0, double g, double wr) { return TsParams{w0, g, wr}; }), py::arg("omega0_ts"),
           py::arg("g_ts"), py::arg("omega_r"))
      .def_readwrite("omega0_ts", &TsParams::omega0_ts)
      .def_readwrite("g_ts", &TsParams::g_ts)
      .def_readwrite("omega_r", &TsParams::omega_r);

  py::class_<TsDressed>(m, "TsDressed")
      .def_readonly("xi_ts", &TsDressed::xi_ts)
      .def_readonly("omega0_bar", &TsDressed::omega0_bar)
      .def_readonly("theta", &TsDressed::theta)
      .def_readonly("delta", &TsDressed::delta)
      .def_readonly("g_eff", &TsDressed::g_eff)
      .def_readonly("omega_tilde", &TsDressed::omega_tilde);

  m.def("solve_xi_ts", &solve_xi_ts);
  m.def("ts_dressed", &ts_dressed, py::arg("ts"), py::arg("omega_d"), py::arg("omega_amp"),
        py::arg("amplitude") = TsAmplitude::Literal);
  m.def("calibrate_ts", &calibrate_ts, py::arg("omega_q0"), py::arg("omega_r0"), py::arg("chi_qr"),
        py::arg("omega_r"), py::arg("dim_r") = 8);
  m.def("compute_k_ts", &compute_k_ts, py::arg("ts"), py::arg("omega_d"), py::arg("omega_amp"), py::arg("dim_r") = 8,
        py::arg("amplitude") = TsAmplitude::Literal);

  py::class_<RenormalizedSpectrumReport>(m, "RenormalizedSpectrumReport")
      .def_readonly("stark", &RenormalizedSpectrumReport::stark)
      .def_readonly("lamb_ratio", &RenormalizedSpectrumReport::lamb_ratio)
      .def_readonly("chiqr_ratio", &RenormalizedSpectrumReport::chiqr_ratio);
  m.def("spectrum_report",
        py::overload_cast<const CoupledKamiltonian&, const CoupledKamiltonian&, const TransmonKamiltonian&,
                          const TransmonKamiltonian&>(&spectrum_report));

  py::class_<NoisePsd>(m, "NoisePsd")
      .def(py::init<>())
      .def_static("flat", &NoisePsd::flat)
      .def_readwrite("coeffs", &NoisePsd::coeffs)
      .def_readwrite("s_par_zero", &NoisePsd::s_par_zero)
      .def("s_perp", &NoisePsd::s_perp);
  py::class_<CoherenceTimes>(m, "CoherenceTimes")
      .def_readonly("t1", &CoherenceTimes::t1)
      .def_readonly("t_phi", &CoherenceTimes::t_phi)
      .def_readonly("t2", &CoherenceTimes::t2);
  m.def("rabi_frequency", &rabi_frequency);
  m.def("coherence_times", &coherence_times);
  m.def("fit_noise_psd", &fit_noise_psd, py::arg("points"),
        py::arg("omega_ref") = std::numeric_limits<double>::quiet_NaN());

  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("t_total", &OracleConfig::t_total)
      .def_readwrite("dt", &OracleConfig::dt)
      .def_readwrite("rotating_frame", &OracleConfig::rotating_frame);
  py::class_<Peak>(m, "Peak")
      .def_readonly("center", &Peak::center)
      .def_readonly("width", &Peak::width)
      .def_readonly("amplitude", &Peak::amplitude);
  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def_readonly("freqs", &SpectrumResult::freqs)
      .def_readonly("power", &SpectrumResult::power)
      .def_readonly("peaks", &SpectrumResult::peaks)
      .def_readonly("resolution", &SpectrumResult::resolution);
  m.def("absorption_spectrum", &absorption_spectrum, py::call_guard<py::gil_scoped_release>());
  m.def("main_peak", &main_peak);

  m.def(
      "compute_rows",
      [](const std::string& config_json, int workers) {
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = compute_rows(config_from_string(config_json), workers);
        }
        py::list out;
        for (const SweepRow& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("config_json"), py::arg("workers") = 1);
  m.def(
      "run_sweep", [](const std::string& config_json, int workers) { return run_sweep(config_from_string(config_json), workers); },
      py::arg("config_json"), py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("report", &report);
}
