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

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace holonomy {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Dense Hermitian matrix. Construction checks
/// ||H - H^dagger||_max <= 1e-12 * ||H||_max and then stores the exactly
/// Hermitian part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Eigen-decomposition with eigenvalues sorted ascending.
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

Spectrum eigh(const Matrix& h);

namespace pauli {
Matrix2 identity();
Matrix2 x();
Matrix2 y();
Matrix2 z();
}  // namespace pauli

Matrix kron(const Matrix& a, const Matrix& b);

/// exp(-i * t * H) for Hermitian H, by spectral decomposition.
Matrix evolve_exp(const Matrix& h, double t);

/// exp(i * K) for Hermitian K.
Matrix unitary_exp(const Matrix& k);

/// Hermitian K with exp(i K) = U and spectrum of K in (-pi, pi].
Matrix unitary_log(const Matrix& u);

double max_abs(const Matrix& m);
double hermiticity_error(const Matrix& m);
/// ||U^dagger U - I||_max
double unitarity_error(const Matrix& u);

/// min over chi of ||a - e^{i chi} b||_max
double distance_up_to_phase(const Matrix& a, const Matrix& b);

/// Largest principal angle between the column spans of a and b.
double max_principal_angle(const Matrix& a, const Matrix& b);

/// Orthonormal basis of the column span via Householder QR.
Matrix orthonormalize(const Matrix& a);

/// Reduces an angle into (-pi, pi].
double wrap_phase(double x);

inline double phase_distance(double a, double b) {
  return std::abs(wrap_phase(a - b));
}

}  // namespace holonomy
