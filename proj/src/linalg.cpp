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

#include "holonomy/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "holonomy/errors.hpp"

namespace holonomy {

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    fail(ErrorCode::NotHermitian, "matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    fail(ErrorCode::NotHermitian, "matrix has non-finite entries");
  }
  const double scale = max_abs(m);
  if (hermiticity_error(m) > 1e-12 * std::max(scale, 1e-300)) {
    fail(ErrorCode::NotHermitian, "||H - H^dagger|| exceeds 1e-12 ||H||");
  }
  m_ = 0.5 * (m + m.adjoint());
}

Spectrum eigh(const Matrix& h) {
  const Eigen::Index n = h.rows();
  if (n == 2) {
    // Closed form keeps the many small solves in the propagator cheap.
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const Complex b = h(0, 1);
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::hypot(half, std::abs(b));
    Spectrum s;
    s.values.resize(2);
    s.values << mean - r, mean + r;
    s.vectors.resize(2, 2);
    if (r == 0.0) {
      s.vectors.setIdentity();
      return s;
    }
    // H - mean = r (cos t sz + sin t (cos phi sx + sin phi sy)), b^* = |b| e^{i phi}.
    const double ct = std::clamp(half / r, -1.0, 1.0);
    const double c = std::sqrt(0.5 * (1.0 + ct));
    const double sn = std::sqrt(0.5 * (1.0 - ct));
    const Complex phase = std::abs(b) > 0.0 ? std::conj(b) / std::abs(b)
                                            : Complex{1.0, 0.0};
    s.vectors(0, 1) = c;
    s.vectors(1, 1) = phase * sn;
    s.vectors(0, 0) = -std::conj(phase) * sn;
    s.vectors(1, 0) = c;
    return s;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace pauli {
Matrix2 identity() { return Matrix2::Identity(); }
Matrix2 x() {
  Matrix2 m;
  m << 0, 1, 1, 0;
  return m;
}
Matrix2 y() {
  Matrix2 m;
  m << 0, -kI, kI, 0;
  return m;
}
Matrix2 z() {
  Matrix2 m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix evolve_exp(const Matrix& h, double t) {
  const Spectrum s = eigh(h);
  Vector phases(s.values.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, -t * s.values(k));
  }
  return s.vectors * phases.asDiagonal() * s.vectors.adjoint();
}

Matrix unitary_exp(const Matrix& k) { return evolve_exp(k, -1.0); }

Matrix unitary_log(const Matrix& u) {
  // A unitary matrix is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Vector angles(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    angles(k) = wrap_phase(std::arg(t(k, k)));
  }
  Matrix k = q * angles.asDiagonal() * q.adjoint();
  return 0.5 * (k + k.adjoint());
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix& m) { return max_abs(m - m.adjoint()); }

double unitarity_error(const Matrix& u) {
  return max_abs(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols()));
}

double distance_up_to_phase(const Matrix& a, const Matrix& b) {
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  return max_abs(a - phase * b);
}

Matrix orthonormalize(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

double max_principal_angle(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormalize(a);
  const Matrix qb = orthonormalize(b);
  Eigen::JacobiSVD<Matrix> svd(qa.adjoint() * qb);
  const double smallest = std::clamp(svd.singularValues().minCoeff(), 0.0, 1.0);
  // acos loses precision near 1; use the sine of the angle via the residual.
  const Matrix residual = qb - qa * (qa.adjoint() * qb);
  Eigen::JacobiSVD<Matrix> rsvd(residual);
  const double s = std::clamp(rsvd.singularValues().maxCoeff(), 0.0, 1.0);
  return smallest > std::sqrt(0.5) ? std::asin(s) : std::acos(smallest);
}

double wrap_phase(double x) {
  double r = std::remainder(x, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

}  // namespace holonomy
