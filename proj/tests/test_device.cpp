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

#include <cmath>

#include <gtest/gtest.h>

#include "dqed/device.hpp"
#include "dqed/errors.hpp"

using namespace dqed;

namespace {

// 4 EC N^2 - EJ cos(phi) in the charge basis, N in [-cut, cut], Ng = 0.
Eigen::VectorXd charge_basis_levels(double ej, double ec, int cut) {
  const int n = 2 * cut + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double q = i - cut;
    h(i, i) = 4.0 * ec * q * q;
    if (i + 1 < n) h(i, i + 1) = h(i + 1, i) = -0.5 * ej;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXd e = es.eigenvalues();
  return e.array() - e(0);
}

}  // namespace

TEST(BareTransmon, HarmonicLimit) {
  DeviceParams p;
  Operator h = build_bare_transmon(p, true);
  EigenDecomposition e = eigh_assigned(h);
  const double w = harmonic_frequency(p);
  for (int n = 0; n < p.dim_q; ++n) EXPECT_NEAR(e.values(n), n * w, 1e-9);
}

TEST(BareTransmon, AnharmonicityNearEc) {
  DeviceParams p;
  BareTransmon bt = bare_transmon(p);
  const double chi = (bt.energies(1) - bt.energies(0)) - (bt.energies(2) - bt.energies(1));
  EXPECT_NEAR(chi / p.ec, 1.0, 0.10);
}

TEST(BareTransmon, ChargeBasisAgreementOrder8) {
  DeviceParams p;
  p.cosine_order = 8;
  p.dim_q = 14;
  BareTransmon bt = bare_transmon(p);
  Eigen::VectorXd ref = charge_basis_levels(p.ej, p.ec, 20);
  for (int n = 1; n < 4; ++n) EXPECT_LT(std::abs(bt.energies(n) - ref(n)), 1e-3) << "level " << n;
}

TEST(BareTransmon, ChargeBasisAgreementDefaultOrderLowLevels) {
  DeviceParams p;
  BareTransmon bt = bare_transmon(p);
  Eigen::VectorXd ref = charge_basis_levels(p.ej, p.ec, 20);
  for (int n = 1; n < 3; ++n) EXPECT_LT(std::abs(bt.energies(n) - ref(n)), 1e-3) << "level " << n;
}

TEST(BareTransmon, Hermitian) {
  DeviceParams p;
  for (int order : {4, 6, 8}) {
    p.cosine_order = order;
    Matrix h = build_bare_transmon(p).data();
    EXPECT_EQ(max_abs(h - h.adjoint()), 0.0);
  }
}

TEST(BareTransmon, GroundAtZero) {
  BareTransmon bt = bare_transmon(DeviceParams{});
  EXPECT_NEAR(bt.energies(0), 0.0, 1e-12);
}

TEST(BareTransmon, TruncationConvergence) {
  auto levels = [](int dim) {
    DeviceParams p;
    p.dim_q = dim;
    return bare_transmon(p).energies;
  };
  Eigen::VectorXd e10 = levels(10), e14 = levels(14), e18 = levels(18);
  EXPECT_LT(std::abs(e10(1) - e14(1)), 1e-6);
  for (int n = 1; n < 4; ++n) {
    EXPECT_LT(std::abs(e14(n) - e18(n)), 1e-6) << "level " << n;
    EXPECT_LE(std::abs(e14(n) - e18(n)), std::abs(e10(n) - e18(n))) << "level " << n;
  }
}

TEST(BareTransmon, CosineOrderConvergence) {
  DeviceParams a, b;
  a.cosine_order = 4;
  b.cosine_order = 6;
  const double wa = bare_transmon(a).energies(1), wb = bare_transmon(b).energies(1);
  EXPECT_LT(std::abs(wa - wb) / wb, 5e-3);
}

TEST(BareTransmon, DipoleMostlyNearestNeighbour) {
  BareTransmon bt = bare_transmon(DeviceParams{});
  EXPECT_GT(std::abs(bt.b(0, 1)), 0.99);
  EXPECT_LT(std::abs(bt.b(1, 0)), 0.05);
  EXPECT_LT(std::abs(bt.d(0, 2)), 1e-12);  // parity
}

TEST(DeviceValidation, Rejects) {
  DeviceParams p;
  p.cosine_order = 5;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_THROW(build_bare_transmon(p), ConfigError);
  p.cosine_order = 2;
  EXPECT_THROW(build_bare_transmon(p), ConfigError);
  p = DeviceParams{};
  p.ej = 2.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = DeviceParams{};
  p.dim_q = 5;
  EXPECT_THROW(p.validate(), ConfigError);
  p = DeviceParams{};
  p.dim_r = 1;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_NO_THROW(p.validate(true));
}

TEST(DriveConstants, ResonantFrameHalf) {
  DeviceParams p;
  const double w = harmonic_frequency(p);
  DriveParams d = drive_constants(p, w, 0.3);
  EXPECT_NEAR(d.xi, 0.5, 1e-15);
  EXPECT_NEAR(d.omega_bar, d.zeta * 0.3, 1e-15);
}

TEST(DriveConstants, ZeroAmplitude) {
  DriveParams d = drive_constants(DeviceParams{}, 5.89, 0.0);
  EXPECT_EQ(d.omega_bar, 0.0);
}

TEST(DriveConstants, ZetaArithmetic) {
  DriveParams d = drive_constants(DeviceParams{}, 10.0, 1.0);
  EXPECT_NEAR(d.zeta, 10.0 / std::sqrt(8 * 28.6 * 0.149), 1e-14);
  EXPECT_NEAR(d.zeta, 1.7126, 1e-4);
  EXPECT_NEAR(d.xi, 1.0 / (1.0 + std::sqrt(8 * 28.6 * 0.149) / 10.0), 1e-14);
}

TEST(DriveConstants, RejectsNonPositiveFrequency) {
  EXPECT_THROW(drive_constants(DeviceParams{}, 0.0, 0.1), DomainError);
}

TEST(Feedline, ZeroAmplitude) {
  EXPECT_EQ(map_feedline_drive(DeviceParams{}, 0.0, 5.89), 0.0);
}

TEST(Feedline, DecouplesFarAway) {
  DeviceParams p;
  const double near = map_feedline_drive(p, 1.0, 5.89);
  const double far = map_feedline_drive(p, 1.0, 1e6);
  EXPECT_LT(far, 1e-5 * near);
}

TEST(Feedline, Arithmetic) {
  DeviceParams p;
  const double expect = 0.245 * std::abs(1.0 / (4.334 - 5.89) - 1.0 / (4.334 + 5.89));
  EXPECT_NEAR(map_feedline_drive(p, 1.0, 5.89), expect, 1e-15);
}

TEST(Feedline, ResonantRejected) {
  DeviceParams p;
  EXPECT_THROW(map_feedline_drive(p, 1.0, p.omega_r), DomainError);
}
