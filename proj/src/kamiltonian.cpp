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

#include "dqed/kamiltonian.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "dqed/errors.hpp"

namespace dqed {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix nearest_neighbour(const Matrix& m) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index n = 0; n + 1 < m.rows(); ++n) {
    out(n, n + 1) = m(n, n + 1);
    out(n + 1, n) = m(n + 1, n);
  }
  return out;
}

Matrix number_op(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) n(i, i) = static_cast<double>(i);
  return n;
}

Matrix diag(const RVector& v) {
  Matrix m = Matrix::Zero(v.size(), v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) m(i, i) = v(i);
  return m;
}

double reconstruction_residual(const Matrix& h, const EigenDecomposition& ed) {
  Matrix r = h * ed.vectors - ed.vectors * ed.values.cast<cplx>().asDiagonal();
  return max_abs(r) / std::max(1.0, max_abs(h));
}

// Diagonalizes a joint (n_q, n_r) Hamiltonian and restores the drive frame by
// adding (n_q + n_r) * frame to each labelled eigenvalue.
// A non-empty drive part is switched on gradually so labels follow the undriven states.
CoupledKamiltonian finish_coupled(const Matrix& h, const DeviceParams& p, double frame, Model model,
                                  const Matrix& drive = Matrix()) {
  CoupledKamiltonian k;
  k.model = model;
  k.device = p;
  k.dressing = drive.size() ? eigh_tracked(h - drive, drive) : eigh_assigned(h);
  k.reconstruction_residual = reconstruction_residual(h, k.dressing);
  RVector e = k.dressing.values_by_label();
  k.energies = Eigen::MatrixXd::Zero(p.dim_q, p.dim_r);
  for (int nq = 0; nq < p.dim_q; ++nq)
    for (int nr = 0; nr < p.dim_r; ++nr) k.energies(nq, nr) = e(nq * p.dim_r + nr) + (nq + nr) * frame;
  k.energies.array() -= k.energies(0, 0);
  extract_spectrum(k);
  return k;
}

Matrix resonator_terms(const DeviceParams& p) {
  return kron(Matrix::Identity(p.dim_q, p.dim_q), p.omega_r * number_op(p.dim_r));
}

Matrix resonator_quadrature(const DeviceParams& p) {
  Matrix a = ladder(p.dim_r, BasisKind::ResonatorFock).data();
  return a - a.adjoint();
}

void check_coupled(const DeviceParams& p) { p.validate(false); }

void add_validity_warning(CoupledKamiltonian& k, const DeviceParams& p, const DriveParams& d) {
  const double xi3 = p.g / (harmonic_frequency(p) + p.omega_r);
  const double delta_rd = p.omega_r - d.omega_d;
  if (!(std::abs(delta_rd) > 10.0 * p.g * xi3)) {
    std::ostringstream os;
    os << "validity: |omega_r - omega_d| = " << std::abs(delta_rd) << " GHz is not >> g*xi3 = " << p.g * xi3;
    k.warnings.push_back(os.str());
  }
}

Matrix dipole_projection_minus(const Matrix& d) {
  Matrix p = Matrix::Zero(d.rows(), d.cols());
  for (Eigen::Index n = 0; n + 1 < d.rows(); ++n) p(n, n + 1) = d(n, n + 1);
  return p;
}

Matrix dipole_projection_plus(const Matrix& d) {
  Matrix p = Matrix::Zero(d.rows(), d.cols());
  for (Eigen::Index n = 0; n + 1 < d.rows(); ++n) p(n + 1, n) = -d(n + 1, n);
  return p;
}

DipoleMatrices sandwich(const Matrix& w, const Matrix& d) {
  const Eigen::Index dim = w.rows();
  DipoleMatrices dm;
  dm.d_minus = w.adjoint() * dipole_projection_minus(d) * w;
  dm.d_plus = w.adjoint() * dipole_projection_plus(d) * w;
  Matrix n = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) n(i, i) = std::sqrt(static_cast<double>(i + 1));
  dm.n_tilde = w.adjoint() * n * w;
  return dm;
}

std::vector<double> diagonal_nonlinearities(const RVector& e, int max_power) {
  // E_n = w n - a4/2 n(n-1) + sum_{m>=3} a_{2m} n!/(n-m)!
  std::vector<double> a;
  const double w = e(1) - e(0);
  a.push_back(w - (e(2) - e(1)));
  for (int m = 3; m <= max_power && m < e.size(); ++m) {
    double model = w * m - 0.5 * a[0] * m * (m - 1);
    for (int j = 3; j < m; ++j) {
      double ff = 1.0;
      for (int t = 0; t < j; ++t) ff *= (m - t);
      model += a[j - 2] * ff;
    }
    double mfact = std::tgamma(m + 1.0);
    a.push_back((e(m) - e(0) - model) / mfact);
  }
  return a;
}

}  // namespace

std::string model_name(Model m) {
  switch (m) {
    case Model::Full: return "Full";
    case Model::K1: return "K1";
    case Model::K2: return "K2";
    case Model::TS: return "TS";
    case Model::RWA: return "RWA";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  if (name == "Full" || name == "K") return Model::Full;
  if (name == "K1") return Model::K1;
  if (name == "K2") return Model::K2;
  if (name == "TS") return Model::TS;
  if (name == "RWA") return Model::RWA;
  throw ConfigError("unknown model '" + name + "'");
}

void extract_spectrum(CoupledKamiltonian& k) {
  const auto& e = k.energies;
  const Eigen::Index dq = e.rows(), dr = e.cols();
  k.omega_q0 = e(1, 0);
  k.omega_r0 = dr > 1 ? e(0, 1) : kNaN;
  k.chi_qr = dr > 1 ? k.omega_q0 - (e(1, 1) - e(0, 1)) : kNaN;
  k.chi_q0 = dq > 2 ? k.omega_q0 - (e(2, 0) - e(1, 0)) : kNaN;
  k.chi_r0 = dr > 2 ? k.omega_r0 - (e(0, 2) - e(0, 1)) : kNaN;
  const double wq = k.omega_q0, wr = k.omega_r0, cq = k.chi_q0, cr = k.chi_r0, cqr = k.chi_qr;
  k.higher.a06 = dq > 3 ? (e(3, 0) - 3 * wq + 3 * cq) / 6.0 : kNaN;
  k.higher.a24 = (dq > 2 && dr > 1) ? (e(2, 1) - 2 * wq - wr + cq + 2 * cqr) / 2.0 : kNaN;
  k.higher.a42 = (dr > 2) ? (e(1, 2) - wq - 2 * wr + cr + 2 * cqr) / 2.0 : kNaN;
  k.higher.a60 = dr > 3 ? (e(0, 3) - 3 * wr + 3 * cr) / 6.0 : kNaN;
}

TransmonKamiltonian kq_from_levels(const RVector& energies, const Matrix& b, const DeviceParams& p,
                                   const DriveParams& d) {
  const int dim = static_cast<int>(energies.size());
  Matrix h0 = Matrix::Zero(dim, dim), drive = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) h0(n, n) = energies(n) - n * d.omega_d;
  for (int n = 0; n + 1 < dim; ++n) {
    drive(n, n + 1) = 0.5 * d.omega_bar * b(n, n + 1);
    drive(n + 1, n) = std::conj(drive(n, n + 1));
  }
  TransmonKamiltonian k;
  k.device = p;
  k.drive = d;
  k.dressing = eigh_tracked(h0, drive);
  k.energies = k.dressing.values_by_label();
  for (int n = 0; n < dim; ++n) k.energies(n) += n * d.omega_d;
  k.energies.array() -= k.energies(0);
  k.omega_q_tilde = k.energies(1);
  k.a_tilde = diagonal_nonlinearities(k.energies, p.cosine_order / 2);
  return k;
}

TransmonKamiltonian compute_kq(const DeviceParams& p, const DriveParams& d) {
  BareTransmon bt = bare_transmon(p);
  return kq_from_levels(bt.energies, bt.b, p, d);
}

DipoleMatrices compute_dipole_matrices(const DeviceParams& p, const DriveParams& d) {
  BareTransmon bt = bare_transmon(p);
  TransmonKamiltonian kq = compute_kq(p, d);
  return sandwich(kq.dressing.vectors_by_label(), bt.d);
}

CoupledKamiltonian undriven_joint(const DeviceParams& p) {
  check_coupled(p);
  BareTransmon bt = bare_transmon(p);
  Matrix h = kron(diag(bt.energies), Matrix::Identity(p.dim_r, p.dim_r)) + resonator_terms(p) +
             p.g * kron(bt.d, resonator_quadrature(p));
  return finish_coupled(h, p, 0.0, Model::Full);
}

CoupledKamiltonian compute_k(const DeviceParams& p, const DriveParams& d) {
  check_coupled(p);
  BareTransmon bt = bare_transmon(p);
  const int dq = p.dim_q, dr = p.dim_r, dim = dq * dr;
  Matrix idr = Matrix::Identity(dr, dr);

  // Exact undriven dressing, counter-rotating exchange included.
  Matrix h_und = kron(diag(bt.energies), idr) + resonator_terms(p) +
                 p.g * kron(nearest_neighbour(bt.d), resonator_quadrature(p));
  EigenDecomposition und = eigh_assigned(h_und);
  RVector e_und = und.values_by_label();
  Matrix u = und.vectors_by_label();
  Matrix b_joint = u.adjoint() * kron(bt.b, idr) * u;

  const double wbar = harmonic_frequency(p);
  const double delta_rd = p.omega_r - d.omega_d;
  if (delta_rd == 0.0) throw DomainError("drive resonant with the bare resonator");
  const double omega_k = d.omega_bar + p.g * p.g * d.zeta * d.omega_amp / (wbar * delta_rd);

  std::vector<int> excitations(dim);
  for (int nq = 0; nq < dq; ++nq)
    for (int nr = 0; nr < dr; ++nr) excitations[nq * dr + nr] = nq + nr;

  Matrix h5 = Matrix::Zero(dim, dim), drive = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) h5(i, i) = e_und(i) - excitations[i] * d.omega_d;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (excitations[j] == excitations[i] + 1) {
        drive(i, j) = 0.5 * omega_k * b_joint(i, j);
        drive(j, i) = std::conj(drive(i, j));
      }
  h5 += drive;
  CoupledKamiltonian k = finish_coupled(h5, p, d.omega_d, Model::Full, drive);
  k.reconstruction_residual = std::max(k.reconstruction_residual, reconstruction_residual(h_und, und));
  add_validity_warning(k, p, d);
  return k;
}

CoupledKamiltonian compute_k1(const DeviceParams& p, const DriveParams& d) {
  check_coupled(p);
  BareTransmon bt = bare_transmon(p);
  TransmonKamiltonian kq = compute_kq(p, d);
  Matrix h = kron(diag(kq.energies), Matrix::Identity(p.dim_r, p.dim_r)) + resonator_terms(p) +
             p.g * kron(nearest_neighbour(bt.d), resonator_quadrature(p));
  CoupledKamiltonian k = finish_coupled(h, p, 0.0, Model::K1);
  add_validity_warning(k, p, d);
  return k;
}

CoupledKamiltonian compute_k2(const DeviceParams& p, const DriveParams& d) {
  check_coupled(p);
  TransmonKamiltonian kq = compute_kq(p, d);
  DipoleMatrices dm = compute_dipole_matrices(p, d);
  // upper band of d_minus minus lower band of d_plus (the projection carries its own sign)
  Matrix x = dipole_projection_minus(dm.d_minus) + dipole_projection_plus(dm.d_plus);
  Matrix h = kron(diag(kq.energies), Matrix::Identity(p.dim_r, p.dim_r)) + resonator_terms(p) +
             p.g * kron(x, resonator_quadrature(p));
  CoupledKamiltonian k = finish_coupled(h, p, 0.0, Model::K2);
  add_validity_warning(k, p, d);
  return k;
}

namespace {

RVector kerr_diagonal(const DeviceParams& p) {
  Matrix h = build_bare_transmon(p).data();
  RVector e(p.dim_q);
  for (int n = 0; n < p.dim_q; ++n) e(n) = h(n, n).real() - h(0, 0).real();
  return e;
}

}  // namespace

TransmonKamiltonian compute_kq_rwa(const DeviceParams& p, const DriveParams& d) {
  RVector e = kerr_diagonal(p);
  Matrix b = ladder(p.dim_q).data();
  Matrix drive = 0.5 * d.zeta * d.omega_amp * (b + b.adjoint());
  Matrix h0 = Matrix::Zero(p.dim_q, p.dim_q);
  for (int n = 0; n < p.dim_q; ++n) h0(n, n) = e(n) - n * d.omega_d;
  TransmonKamiltonian k;
  k.device = p;
  k.drive = d;
  k.dressing = eigh_tracked(h0, drive);
  k.energies = k.dressing.values_by_label();
  for (int n = 0; n < p.dim_q; ++n) k.energies(n) += n * d.omega_d;
  k.energies.array() -= k.energies(0);
  k.omega_q_tilde = k.energies(1);
  k.a_tilde = diagonal_nonlinearities(k.energies, p.cosine_order / 2);
  return k;
}

DipoleMatrices compute_dipole_matrices_rwa(const DeviceParams& p, const DriveParams& d) {
  TransmonKamiltonian kq = compute_kq_rwa(p, d);
  Matrix b = ladder(p.dim_q).data();
  return sandwich(kq.dressing.vectors_by_label(), b - b.adjoint());
}

CoupledKamiltonian compute_k_rwa(const DeviceParams& p, const DriveParams& d) {
  check_coupled(p);
  RVector e = kerr_diagonal(p);
  Matrix b = ladder(p.dim_q).data();
  Matrix a = ladder(p.dim_r, BasisKind::ResonatorFock).data();
  Matrix idr = Matrix::Identity(p.dim_r, p.dim_r);
  Matrix drive = 0.5 * d.zeta * d.omega_amp * kron(b + b.adjoint(), idr);
  Matrix h = kron(diag(e), idr) + resonator_terms(p) -
             p.g * (kron(b.adjoint(), a) + kron(b, a.adjoint())) + drive;
  for (int nq = 0; nq < p.dim_q; ++nq)
    for (int nr = 0; nr < p.dim_r; ++nr) {
      int i = nq * p.dim_r + nr;
      h(i, i) -= (nq + nr) * d.omega_d;
    }
  CoupledKamiltonian k = finish_coupled(h, p, d.omega_d, Model::RWA, drive);
  add_validity_warning(k, p, d);
  return k;
}

ApproximationReport approximation_report(const DeviceParams& p, const DriveParams& d) {
  BareTransmon bt = bare_transmon(p);
  CoupledKamiltonian und = undriven_joint(p);
  ApproximationReport r;
  const double wq = harmonic_frequency(p);
  const double wr = und.omega_r0;
  r.omega_q_used = wq;
  r.omega_r_used = wr;
  const double sigma_qd = wq + d.omega_d, delta_qd = wq - d.omega_d;
  const double delta_rd = wr - d.omega_d;
  const double sigma_qr = wq + wr, delta_qr = wq - wr;
  const double xi3 = p.g / sigma_qr;
  r.kq_filter = std::abs(sigma_qd / delta_qd) * std::abs(bt.b(0, 1)) / std::abs(bt.b(1, 0));
  r.drive_cr = p.g * p.g / (2.0 * wq * std::abs(delta_rd));
  r.drive_cr_inverse = 2.0 * wq * std::abs(delta_rd * sigma_qd) / (p.g * p.g * std::abs(delta_qd));
  r.xi3_ratio = p.g * xi3 / std::abs(delta_rd);
  r.rwa_qd = std::abs(sigma_qd / delta_qd);
  r.rwa_qr = std::abs(sigma_qr / delta_qr);
  r.alpha_ratio = p.ec / wq;
  return r;
}

}  // namespace dqed
