// Copyright 2026 The Holonomy Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "holonomy/errors.hpp"
#include "holonomy/quadrupole.hpp"
#include "oracles.hpp"

using namespace holonomy;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvariantViolated;
}

struct Ops {
  Matrix j2, j3;
};

// Spin-3/2 matrices from the ladder elements, reordered to 3/2, -3/2, 1/2, -1/2.
Ops reference_ops() {
  const double m[4] = {1.5, 0.5, -0.5, -1.5};
  Matrix jp = Matrix::Zero(4, 4), jz = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) jz(i, i) = m[i];
  for (int i = 1; i < 4; ++i) jp(i - 1, i) = std::sqrt(3.75 - m[i] * (m[i] + 1.0));
  const Matrix jy = (jp - jp.adjoint()) / Complex(0.0, 2.0);
  const int order[4] = {0, 3, 1, 2};
  Matrix p = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) p(order[k], k) = 1.0;
  return {p.transpose() * jy * p, p.transpose() * jz * p};
}

Matrix expi(const Matrix& g, double a) { return oracle::taylor_exp(Complex(0.0, -a) * g); }

Matrix lab_h(const QuadrupoleSpec& s, double t) {
  const Ops o = reference_ops();
  const Matrix h0 = s.omega0 * (o.j3 * o.j3 - 1.25 * Matrix::Identity(4, 4));
  const Matrix u = expi(o.j3, s.omega1 * t) * expi(o.j2, s.theta);
  return u * h0 * u.adjoint();
}

std::vector<QuadrupoleSpec> grid() {
  std::vector<QuadrupoleSpec> out;
  for (double th : {0.0, 0.2, 0.5, 0.9, 1.3}) {
    for (double r : {0.01, 0.05, 0.1, 0.3, 1.0}) out.push_back({1.0, r, th});
  }
  return out;
}

double off_diagonal(const Matrix& m) {
  double w = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) w = std::max(w, std::abs(m(i, j)));
  return w;
}

}  // namespace

TEST(Quadrupole, SpecValidation) {
  EXPECT_EQ(code_of([] { QuadrupoleSpec{0.0, 0.1, 0.3}.validate(); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { QuadrupoleSpec{1.0, 0.1, kPi / 2}.validate(); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { QuadrupoleSpec{1.0, 0.1, -0.1}.validate(); }),
            ErrorCode::InvalidArgument);
}

TEST(Quadrupole, LabHamiltonianMatchesReference) {
  const QuadrupoleSpec s{1.3, 0.2, 0.7};
  for (double t : {0.0, 1.1, 9.0}) {
    EXPECT_LE(max_abs(quadrupole_lab_hamiltonian(s, t).matrix() - lab_h(s, t)), 1e-12);
  }
}

TEST(Quadrupole, RotatingFrameRemovesTime) {
  const Ops o = reference_ops();
  for (const QuadrupoleSpec& s : {QuadrupoleSpec{1.0, 0.1, 0.4}, QuadrupoleSpec{2.0, -0.7, 1.2}}) {
    const Matrix h1 = rotating_frame_hamiltonian(s).matrix();
    for (double t : {0.0, 0.8, 5.5}) {
      const Matrix u1 = expi(o.j3, s.omega1 * t);
      const Matrix ref = u1.adjoint() * lab_h(s, t) * u1 - s.omega1 * o.j3;
      EXPECT_LE(max_abs(h1 - ref), 1e-12);
    }
  }
}

TEST(Quadrupole, QuadrupoleFrameBlocks) {
  const QuadrupoleSpec s{1.0, 0.3, 0.6};
  const Matrix hq = quadrupole_frame_hamiltonian(s).matrix();
  const double w1 = s.omega1, th = s.theta;
  const double xi = w1 * std::sqrt(3.0) / 2.0 * std::sin(th);
  EXPECT_NEAR(std::abs(hq(0, 2)), xi, 1e-12);
  EXPECT_NEAR(std::abs(hq(1, 3)), xi, 1e-12);
  EXPECT_LE(std::abs(hq(0, 3)), 1e-12);
  EXPECT_LE(std::abs(hq(1, 2)), 1e-12);
  EXPECT_NEAR(hq(2, 2).real(), -1.0 - 0.5 * w1 * std::cos(th), 1e-12);
  EXPECT_NEAR(hq(3, 3).real(), -1.0 + 0.5 * w1 * std::cos(th), 1e-12);
  EXPECT_NEAR(std::abs(hq(2, 3)), w1 * std::sin(th), 1e-12);
  const BlockDiagonalization bd = block_diagonalize(s);
  EXPECT_NEAR(std::tan(bd.frame.alpha), 2.0 * std::tan(th), 1e-12);
  EXPECT_NEAR(bd.frame.xi, xi, 1e-15);
}

TEST(Quadrupole, BlockDiagonalizationResidualsOnGrid) {
  for (const QuadrupoleSpec& s : grid()) {
    const BlockDiagonalization bd = block_diagonalize(s);
    SCOPED_TRACE(testing::Message() << "theta " << s.theta << " w1 " << s.omega1);
    EXPECT_LE(bd.frame.unitarity_residual, 1e-12);
    EXPECT_LE(bd.frame.diagonalization_residual, 1e-12);
    EXPECT_LE(max_abs(bd.w.adjoint() * bd.w - Matrix4::Identity()), 1e-12);
    const Matrix h1 = rotating_frame_hamiltonian(s).matrix();
    EXPECT_LE(off_diagonal(bd.w.adjoint() * h1 * bd.w), 1e-12);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h1);
    std::vector<double> got(bd.energies.data(), bd.energies.data() + 4);
    std::sort(got.begin(), got.end());
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(got[i], es.eigenvalues()(i), 1e-12);
  }
}

TEST(Quadrupole, TwoStepCouplingIsSecondOrder) {
  // What the beta step leaves behind shrinks faster than the coupling xi.
  double prev = 0.0;
  for (double r : {0.04, 0.02, 0.01}) {
    const BlockDiagonalization bd = block_diagonalize({1.0, r, 0.7});
    EXPECT_LT(bd.two_step_residual, bd.frame.xi);
    if (prev > 0.0) EXPECT_NEAR(prev / bd.two_step_residual, 2.0, 0.2);
    prev = bd.two_step_residual;
  }
}

TEST(Quadrupole, ConnectionHermitianAndStatic) {
  for (const QuadrupoleSpec& s : grid()) {
    const QuadrupoleConnection c = connection(s);
    EXPECT_LE(c.hermiticity_error, 1e-12);
    EXPECT_LE(c.time_drift, 1e-12);
  }
}

TEST(Quadrupole, ConnectionMatchesFiniteDifference) {
  const Ops o = reference_ops();
  const QuadrupoleSpec s{1.0, 0.2, 0.8};
  const QuadrupoleConnection c = connection(s);
  const Matrix w = block_diagonalize(s).w;
  const double phi = 1.7, h = 1e-5;
  const Matrix u = expi(o.j3, phi) * w;
  const Matrix du = (expi(o.j3, phi + h) - expi(o.j3, phi - h)) * w / (2.0 * h);
  const Matrix a = Complex(0.0, 1.0) * u.adjoint() * du;
  EXPECT_LE(max_abs(a - c.a), 1e-8);
}

TEST(Quadrupole, ClosedFormBlocksFollowMirroredRotation) {
  for (const QuadrupoleSpec& s : grid()) {
    if (s.theta == 0.0) continue;
    const QuadrupoleConnection c = connection(s);
    EXPECT_LE(c.mirrored_mismatch, 1e-12);
    EXPECT_LE(max_abs(c.closed_form - c.closed_form.adjoint()), 1e-15);
  }
  // The two-step numeric connection is i U^dagger dU for U = U1 u2 u3.
  const QuadrupoleSpec s{1.0, 0.1, 0.5};
  const BlockDiagonalization bd = block_diagonalize(s);
  const Matrix v = bd.u2 * bd.u3;
  const Matrix ref = v.adjoint() * reference_ops().j3 * v;
  EXPECT_LE(max_abs(connection(s).two_step - ref), 1e-7);
}

TEST(Quadrupole, EvolveMatchesLabOracle) {
  for (double th : {0.5, kPi / 4}) {
    const QuadrupoleSpec s{1.0, 0.1, th};
    const double period = kTwoPi / s.omega1;
    const Matrix u = oracle::rk4_propagator([&](double t) { return lab_h(s, t); }, 0.0, period,
                                            20000);
    std::mt19937 rng(41);
    for (int trial = 0; trial < 3; ++trial) {
      Vector psi0 = oracle::random_unitary(4, rng).col(0);
      if (trial == 0) psi0 = Vector::Unit(4, 2);
      const Vector got = evolve(s, psi0, period);
      EXPECT_LE((got - u * psi0).cwiseAbs().maxCoeff(), 1e-6);
    }
    const Vector mid = evolve(s, Vector::Unit(4, 0), 0.37 * period);
    const Matrix um = oracle::rk4_propagator([&](double t) { return lab_h(s, t); }, 0.0,
                                             0.37 * period, 8000);
    EXPECT_LE((mid - um.col(0)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Quadrupole, EvolveRejectsBadState) {
  const QuadrupoleSpec s{1.0, 0.1, 0.5};
  EXPECT_EQ(code_of([&] { evolve(s, Vector::Ones(4), 1.0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { evolve(s, Vector::Unit(2, 0), 1.0); }), ErrorCode::InvalidArgument);
}

TEST(Quadrupole, GateUnitaryAndMixing) {
  const QuadrupoleSpec s{1.0, 0.1, kPi / 4};
  const QuadrupoleGate g = two_qubit_gate(s, 0.25 * kTwoPi / s.omega1);
  EXPECT_LE(max_abs(g.u.adjoint() * g.u - Matrix4::Identity()), 1e-10);
  EXPECT_GE(off_diagonal(g.u), 1e-3);
  // Holonomic part is generated by A alone.
  EXPECT_LE(max_abs(g.holonomic - expi(g.a, s.omega1 * g.t)), 1e-10);
  for (int n = 0; n < 4; ++n) {
    EXPECT_NEAR(g.dynamic_phases(n), block_diagonalize(s).energies(n) * g.t, 1e-9);
  }
}

TEST(Quadrupole, FullTurnHolonomyIsMinusIdentity) {
  // e^{-2 pi i J3} = -1 for half-integer spin, so a full turn cannot mix.
  for (double th : {0.3, kPi / 4, 1.2}) {
    const QuadrupoleSpec s{1.0, 0.1, th};
    const QuadrupoleGate g = two_qubit_gate(s, kTwoPi / s.omega1);
    EXPECT_LE(max_abs(g.holonomic + Matrix4::Identity()), 1e-10);
  }
}

TEST(Quadrupole, UntiltedGateIsDiagonal) {
  const QuadrupoleSpec s{1.0, 0.2, 0.0};
  const QuadrupoleGate g = two_qubit_gate(s, 3.0);
  EXPECT_LE(off_diagonal(g.u), 1e-14);
  EXPECT_TRUE(block_diagonalize(s).frame.trivial);
  // Each basis state only picks up its lab energy: -w1 m t from the frame and
  // w0 (m^2 - 5/4) t, with the frame phase undone by e^{-i w1 t A}.
  const double m[4] = {1.5, -1.5, 0.5, -0.5};
  for (int n = 0; n < 4; ++n) {
    const double e = s.omega0 * (m[n] * m[n] - 1.25);
    EXPECT_NEAR(std::abs(g.u(n, n) - std::polar(1.0, -e * 3.0)), 0.0, 1e-12);
  }
}
