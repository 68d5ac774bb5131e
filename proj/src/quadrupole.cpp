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

#include "holonomy/quadrupole.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

Matrix4 tilt(double theta) {
  return evolve_exp(spin32_generators().J2, theta);
}

double max_off_diagonal(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    }
  }
  return worst;
}

// Eigenvectors of a nearly diagonal Hermitian matrix, permuted so that each
// column sits where its largest component is and phased so that component is
// real and positive.
Matrix4 aligned_eigenvectors(const Matrix4& m) {
  const Spectrum s = eigh(m);
  std::array<int, 4> slot{-1, -1, -1, -1};
  std::array<bool, 4> taken{};
  struct Entry {
    double mag;
    int row, col;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) entries.push_back({std::abs(s.vectors(i, j)), i, j});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.mag > b.mag; });
  for (const Entry& e : entries) {
    if (slot[e.col] < 0 && !taken[e.row]) {
      slot[e.col] = e.row;
      taken[e.row] = true;
    }
  }
  Matrix4 out;
  for (int j = 0; j < 4; ++j) {
    const int row = slot[j];
    const Complex lead = s.vectors(row, j);
    out.col(row) = s.vectors.col(j) * (std::conj(lead) / std::abs(lead));
  }
  return out;
}

}  // namespace

HermitianMatrix rotating_frame_hamiltonian(const QuadrupoleSpec& spec) {
  spec.validate();
  const Matrix4 r = tilt(spec.theta);
  const Matrix4 h = r * quadrupole_static(spec) * r.adjoint() -
                    spec.omega1 * spin32_generators().J3;
  return HermitianMatrix(h);
}

HermitianMatrix quadrupole_frame_hamiltonian(const QuadrupoleSpec& spec) {
  const Matrix4 r = tilt(spec.theta);
  return HermitianMatrix(r.adjoint() * rotating_frame_hamiltonian(spec).matrix() * r);
}

BlockDiagonalization block_diagonalize(const QuadrupoleSpec& spec) {
  spec.validate();
  const Matrix4 h1 = rotating_frame_hamiltonian(spec).matrix();
  const Matrix4 hq = quadrupole_frame_hamiltonian(spec).matrix();
  const double theta = spec.theta;
  const double w1 = spec.omega1;

  BlockDiagonalization out;
  Spin32Frame& f = out.frame;
  f.alpha = std::atan(2.0 * std::tan(theta));
  f.xi = w1 * std::sqrt(3.0) / 2.0 * std::sin(theta);
  f.trivial = (theta == 0.0 || w1 == 0.0);

  out.u2 = Matrix4::Identity();
  const double a = -0.5 * f.alpha;
  out.u2(2, 2) = std::cos(a);
  out.u2(2, 3) = -std::sin(a);
  out.u2(3, 2) = std::sin(a);
  out.u2(3, 3) = std::cos(a);

  const Matrix4 h2 = out.u2.adjoint() * hq * out.u2;
  f.lambda1 << h2(0, 0).real(), h2(1, 1).real();
  f.lambda2 << h2(2, 2).real(), h2(3, 3).real();

  out.u3 = Matrix4::Identity();
  if (!f.trivial) {
    for (int i = 0; i < 2; ++i) {
      const double dl = f.lambda1(i) - f.lambda2(i);
      f.k(i) = dl / (2.0 * f.xi);
      const double root = std::hypot(1.0, f.k(i));
      // k + sqrt(1 + k^2) without cancellation for k < 0.
      f.mu(i) = f.k(i) >= 0.0 ? f.k(i) + root : 1.0 / (root - f.k(i));
      f.beta1_sq(i) = 1.0 / (1.0 + f.mu(i) * f.mu(i));
      f.beta2_sq(i) = 1.0 - f.beta1_sq(i);
      const double b1 = std::sqrt(f.beta1_sq(i));
      const double b2 = std::sqrt(f.beta2_sq(i));
      const int p = i, q = i + 2;
      out.u3(p, p) = b1;
      out.u3(p, q) = b2;
      out.u3(q, p) = -b2;
      out.u3(q, q) = b1;
      f.unitarity_residual =
          std::max(f.unitarity_residual, std::abs(b1 * b1 + b2 * b2 - 1.0));
      f.diagonalization_residual =
          std::max(f.diagonalization_residual,
                   std::abs(f.xi * (b1 * b1 - b2 * b2) + dl * b1 * b2));
    }
  }

  const Matrix4 v = out.u2 * out.u3;
  const Matrix4 h3 = v.adjoint() * hq * v;
  out.two_step_residual = max_off_diagonal(h3);
  const double scale = std::max(1.0, max_abs(hq));
  out.u4 = out.two_step_residual > 1e-14 * scale ? aligned_eigenvectors(h3)
                                                 : Matrix4::Identity();
  out.w = tilt(theta) * v * out.u4;
  const Matrix4 d = out.w.adjoint() * h1 * out.w;
  out.residual = max_off_diagonal(d);
  out.energies = d.diagonal().real();
  return out;
}

QuadrupoleConnection connection(const QuadrupoleSpec& spec) {
  const BlockDiagonalization bd = block_diagonalize(spec);
  const Matrix4& j3 = spin32_generators().J3;
  QuadrupoleConnection c;
  const Matrix4 raw = bd.w.adjoint() * j3 * bd.w;
  c.hermiticity_error = hermiticity_error(raw);
  c.a = 0.5 * (raw + raw.adjoint());

  for (double phi : {0.0, kTwoPi / 3.0, 2.0 * kTwoPi / 3.0}) {
    // i U^dagger dU/dphi with U = U1(phi) W and dU1/dphi = -i J3 U1.
    const Matrix4 u1 = evolve_exp(j3, phi);
    const Matrix4 u = u1 * bd.w;
    const Matrix4 a_phi = kI * u.adjoint() * (-kI * j3 * u);
    c.time_drift = std::max(c.time_drift, max_abs(a_phi - c.a));
  }

  const Spin32Frame& f = bd.frame;
  const double ca = std::cos(f.alpha);
  const double sa = std::sin(f.alpha);
  const Eigen::Vector2d b1 = f.beta1_sq.cwiseSqrt();
  const Eigen::Vector2d b2 = f.beta2_sq.cwiseSqrt();
  c.a32 = 0.25 * (3 * f.beta1_sq(0) - 3 * f.beta1_sq(1) +
                  f.beta2_sq(0) * ca - f.beta2_sq(1) * ca);
  c.b32 = 0.25 * (3 * f.beta1_sq(0) + 3 * f.beta1_sq(1) +
                  f.beta2_sq(0) * ca + f.beta2_sq(1) * ca);
  c.c32 = -0.5 * sa * b2(0) * b2(1);
  c.a12 = 0.25 * (3 * f.beta2_sq(0) - 3 * f.beta2_sq(1) +
                  f.beta1_sq(0) * ca - f.beta1_sq(1) * ca);
  c.b12 = 0.25 * (3 * f.beta2_sq(0) + 3 * f.beta2_sq(1) +
                  f.beta1_sq(0) * ca + f.beta1_sq(1) * ca);
  c.c12 = -0.5 * sa * b1(0) * b1(1);
  const Matrix2 beta1 = Eigen::Vector2cd(b1(0), b1(1)).asDiagonal();
  const Matrix2 beta2 = Eigen::Vector2cd(b2(0), b2(1)).asDiagonal();
  c.a_tr = 0.5 * (3.0 - ca) * beta1 * beta2 * pauli::z() +
           0.5 * sa * beta2 * pauli::x() * beta1;
  c.closed_form.setZero();
  c.closed_form.block<2, 2>(0, 0) = c.a32 * pauli::identity() + c.b32 * pauli::z() +
                                    c.c32 * pauli::x();
  c.closed_form.block<2, 2>(2, 2) = c.a12 * pauli::identity() + c.b12 * pauli::z() +
                                    c.c12 * pauli::x();
  c.closed_form.block<2, 2>(0, 2) = c.a_tr;
  c.closed_form.block<2, 2>(2, 0) = c.a_tr.transpose();

  const double h = 1e-4;
  const Matrix4 v = bd.u2 * bd.u3;
  const Matrix4 plus = evolve_exp(j3, h) * v;
  const Matrix4 minus = evolve_exp(j3, -h) * v;
  c.two_step = kI * v.adjoint() * (plus - minus) / (2.0 * h);
  c.closed_form_mismatch = max_abs(c.closed_form - c.two_step);
  const Matrix4 vm = bd.u2.adjoint() * bd.u3;
  c.mirrored_mismatch = max_abs(c.closed_form - vm.adjoint() * j3 * vm);
  return c;
}

QuadrupoleGate two_qubit_gate(const QuadrupoleSpec& spec, double t) {
  const BlockDiagonalization bd = block_diagonalize(spec);
  const Matrix4& j3 = spin32_generators().J3;
  QuadrupoleGate g;
  g.t = t;
  g.w = bd.w;
  const Matrix4 raw = bd.w.adjoint() * j3 * bd.w;
  g.a = 0.5 * (raw + raw.adjoint());
  g.holonomic = evolve_exp(g.a, spec.omega1 * t);
  g.dynamic_phases = bd.energies * t;
  Eigen::Vector4cd phases;
  for (int n = 0; n < 4; ++n) phases(n) = std::polar(1.0, -g.dynamic_phases(n));
  g.u = g.holonomic * phases.asDiagonal();
  return g;
}

Vector evolve(const QuadrupoleSpec& spec, const Vector& psi0, double t) {
  if (psi0.size() != 4) fail(ErrorCode::InvalidArgument, "state must have 4 components");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) {
    fail(ErrorCode::InvalidArgument, "state must be normalized");
  }
  const QuadrupoleGate g = two_qubit_gate(spec, t);
  return g.w * (g.u * (g.w.adjoint() * psi0));
}

}  // namespace holonomy
