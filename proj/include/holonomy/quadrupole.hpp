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

#pragma once

#include "holonomy/linalg.hpp"
#include "holonomy/models.hpp"

namespace holonomy {

// Spin-3/2 quadrupole rotated about z at w1. All 4x4 matrices use the block
// basis |3/2>, |-3/2>, |1/2>, |-1/2>.

/// H1 = e^{-i theta J2} H0 e^{i theta J2} - w1 J3, the static Hamiltonian in
/// the frame co-rotating with the sample.
HermitianMatrix rotating_frame_hamiltonian(const QuadrupoleSpec& spec);

/// H1' = e^{i theta J2} H1 e^{-i theta J2} = H0 - w1 Jt3 with
/// Jt3 = e^{i theta J2} J3 e^{-i theta J2}, the quadrupole-axis frame. In
/// blocks: diag(lambda1) and -w0 - (w1/2) cos(theta) s3 + w1 sin(theta) s1,
/// coupled by xi = w1 (sqrt 3 / 2) sin(theta).
HermitianMatrix quadrupole_frame_hamiltonian(const QuadrupoleSpec& spec);

struct Spin32Frame {
  double alpha = 0.0;  ///< tan alpha = 2 tan theta
  double xi = 0.0;     ///< w1 (sqrt 3 / 2) sin theta
  Eigen::Vector2d lambda1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d lambda2 = Eigen::Vector2d::Zero();
  Eigen::Vector2d k = Eigen::Vector2d::Zero();
  Eigen::Vector2d mu = Eigen::Vector2d::Zero();
  Eigen::Vector2d beta1_sq = Eigen::Vector2d::Ones();
  Eigen::Vector2d beta2_sq = Eigen::Vector2d::Zero();
  double unitarity_residual = 0.0;        ///< max |beta1^2 + beta2^2 - 1|
  double diagonalization_residual = 0.0;  ///< max |xi(b1^2 - b2^2) + dlambda b1 b2|
  bool trivial = false;                   ///< theta = 0 or w1 = 0
};

struct BlockDiagonalization {
  Matrix4 u2;  ///< rotation by -alpha/2 in the +-1/2 block
  Matrix4 u3;  ///< beta rotation pairing (3/2, 1/2) and (-3/2, -1/2)
  Matrix4 u4;  ///< eigen-solve of the remainder, columns aligned to I
  Matrix4 w;   ///< e^{-i theta J2} u2 u3 u4, diagonalizes H1
  Spin32Frame frame;
  double two_step_residual = 0.0;  ///< max off-diagonal of (u2 u3)^T H1' (u2 u3)
  double residual = 0.0;           ///< max off-diagonal of W^dagger H1 W
  RealVector energies;             ///< diagonal of W^dagger H1 W
};

BlockDiagonalization block_diagonalize(const QuadrupoleSpec& spec);

struct QuadrupoleConnection {
  /// A = W^dagger J3 W, so that i U^dagger dU/dphi = A for U = U1(phi) W.
  Matrix4 a;
  double hermiticity_error = 0.0;
  double time_drift = 0.0;  ///< max change over phi in {0, 2 pi/3, 4 pi/3}

  // Closed-form blocks in a, b, c coefficients, evaluated with the beta and
  // alpha above.
  double a32 = 0.0, b32 = 0.0, c32 = 0.0;
  double a12 = 0.0, b12 = 0.0, c12 = 0.0;
  Matrix2 a_tr;
  Matrix4 closed_form;     ///< [[A_3/2, A^tr], [A^tr^T, A_1/2]]
  Matrix4 two_step;        ///< i U^dagger dU/dphi for U = U1 u2 u3, by differences
  double closed_form_mismatch = 0.0;  ///< max |closed_form - two_step|
  /// Same comparison with u2 rotating by +alpha/2. The closed-form blocks follow
  /// that sense of rotation, so this sits at rounding level.
  double mirrored_mismatch = 0.0;
};

QuadrupoleConnection connection(const QuadrupoleSpec& spec);

struct QuadrupoleGate {
  Matrix4 u;           ///< e^{-i w1 t A} e^{-i D t} in the W basis
  Matrix4 holonomic;   ///< e^{-i w1 t A}
  RealVector dynamic_phases;  ///< E_n t
  Matrix4 a;
  Matrix4 w;
  double t = 0.0;
};

/// Laboratory state psi(t) = W e^{-i w1 t A} e^{-i D t} W^dagger psi0.
Vector evolve(const QuadrupoleSpec& spec, const Vector& psi0, double t);

QuadrupoleGate two_qubit_gate(const QuadrupoleSpec& spec, double t);

}  // namespace holonomy
