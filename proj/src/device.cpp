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

#include "dqed/device.hpp"

#include <cmath>
#include <string>

#include "dqed/errors.hpp"

namespace dqed {

void DeviceParams::validate(bool allow_bare_transmon) const {
  if (!(ej > 0) || !(ec > 0)) throw ConfigError("ej and ec must be positive");
  if (ej / ec <= 20) throw ConfigError("ej/ec must exceed 20 (transmon regime)");
  if (cosine_order != 4 && cosine_order != 6 && cosine_order != 8)
    throw ConfigError("cosine_order must be 4, 6 or 8, got " + std::to_string(cosine_order));
  if (dim_q < 6) throw ConfigError("dim_q must be >= 6");
  int min_r = allow_bare_transmon ? 1 : 2;
  if (dim_r < min_r) throw ConfigError("dim_r must be >= " + std::to_string(min_r));
  if (!(omega_r > 0)) throw ConfigError("omega_r must be positive");
  if (!(g >= 0)) throw ConfigError("g must be non-negative");
}

double harmonic_frequency(const DeviceParams& p) { return std::sqrt(8.0 * p.ej * p.ec); }

double phase_zpf(const DeviceParams& p) { return std::pow(2.0 * p.ec / p.ej, 0.25); }

Operator build_bare_transmon(const DeviceParams& p, bool harmonic_only) {
  if (p.cosine_order < 4 || p.cosine_order % 2 != 0)
    throw ConfigError("cosine_order must be even and >= 4");
  p.validate(true);
  const int d = p.dim_q;
  // powers of x are formed in a padded space so the kept block is exact
  const int pad = d + p.cosine_order;
  Matrix b = ladder(pad).data();
  Matrix x = b + b.adjoint();
  Matrix h = harmonic_frequency(p) * (b.adjoint() * b);
  if (!harmonic_only) {
    // -EJ cos(phi) beyond the quadratic term; phi = phi0 (b + b^dag)
    const double phi0 = phase_zpf(p);
    Matrix x2 = x * x;
    Matrix xpow = x2;
    double fact = 2.0;
    for (int k = 2; k <= p.cosine_order / 2; ++k) {
      xpow = xpow * x2;
      fact *= (2.0 * k - 1) * (2.0 * k);
      double sign = (k % 2 == 0) ? 1.0 : -1.0;
      h -= (p.ej * sign * std::pow(phi0, 2 * k) / fact) * xpow;
    }
  }
  h = Matrix(h.topLeftCorner(d, d));
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  h -= es.eigenvalues()(0) * Matrix::Identity(d, d);
  return Operator(h, {BasisKind::TransmonFock, 0, 0});
}

BareTransmon bare_transmon(const DeviceParams& p) {
  Operator h = build_bare_transmon(p);
  EigenDecomposition ed = eigh_assigned(h);
  BareTransmon out;
  out.energies = ed.values_by_label();
  out.energies.array() -= out.energies(0);
  out.vectors = ed.vectors_by_label();
  Matrix b = ladder(p.dim_q).data();
  out.b = out.vectors.adjoint() * b * out.vectors;
  out.d = out.vectors.adjoint() * (b - b.adjoint()) * out.vectors;
  out.phi = out.vectors.adjoint() * (b + b.adjoint()) * out.vectors;
  return out;
}

DriveParams drive_constants(const DeviceParams& p, double omega_d, double omega_amp) {
  if (!(omega_d > 0)) throw DomainError("omega_d must be positive");
  const double wbar = harmonic_frequency(p);
  DriveParams d;
  d.omega_d = omega_d;
  d.omega_amp = omega_amp;
  d.zeta = omega_d / wbar;
  d.xi = 1.0 / (1.0 + wbar / omega_d);
  d.omega_bar = d.zeta * omega_amp * (1.0 - d.xi) + d.zeta * d.xi * omega_amp * (wbar / omega_d);
  return d;
}

double map_feedline_drive(const DeviceParams& p, double omega_feed_amp, double omega_d) {
  const double delta = p.omega_r - omega_d;
  if (delta == 0.0) throw DomainError("feedline drive resonant with the resonator");
  const double sigma = p.omega_r + omega_d;
  return p.g * omega_feed_amp * std::abs(1.0 / delta - 1.0 / sigma);
}

}  // namespace dqed
