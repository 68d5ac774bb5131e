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

#include "holonomy/errors.hpp"
#include "holonomy/linalg.hpp"
#include "oracles.hpp"

using namespace holonomy;

TEST(HermitianMatrix, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  try {
    HermitianMatrix h(m);
    FAIL() << "expected NotHermitian";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(HermitianMatrix, RejectsNonSquareAndNonFinite) {
  EXPECT_THROW(HermitianMatrix(Matrix::Zero(2, 3)), Error);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 0) = std::nan("");
  EXPECT_THROW(HermitianMatrix{m}, Error);
}

TEST(Eigh, AscendingAndResidualSmall) {
  std::mt19937 rng(7);
  for (int n : {1, 2, 3, 4, 6, 9}) {
    const Matrix h = oracle::random_hermitian(n, rng);
    const Spectrum s = eigh(h);
    for (int i = 1; i < n; ++i) EXPECT_LE(s.values(i - 1), s.values(i));
    EXPECT_LT(max_abs(h * s.vectors - s.vectors * s.values.asDiagonal()), 1e-12);
    EXPECT_LT(unitarity_error(s.vectors), 1e-12);
  }
}

TEST(Eigh, TwoByTwoDegenerateAndDiagonal) {
  const Spectrum s = eigh(Matrix::Identity(2, 2) * 3.0);
  EXPECT_DOUBLE_EQ(s.values(0), 3.0);
  EXPECT_DOUBLE_EQ(s.values(1), 3.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  const Spectrum t = eigh(d);
  EXPECT_DOUBLE_EQ(t.values(0), -1.0);
  EXPECT_NEAR(std::abs(t.vectors(1, 0)), 1.0, 1e-15);
}

TEST(Exponentials, MatchTaylorOracle) {
  std::mt19937 rng(11);
  for (int n : {2, 4, 5}) {
    const Matrix h = oracle::random_hermitian(n, rng);
    const double t = 0.7;
    const Matrix expected = oracle::taylor_exp(Complex(0.0, -t) * h);
    EXPECT_LT(max_abs(evolve_exp(h, t) - expected), 1e-12);
    EXPECT_LT(max_abs(unitary_exp(h) - oracle::taylor_exp(kI * h)), 1e-12);
  }
}

TEST(Exponentials, LogInvertsExpOnPrincipalBranch) {
  std::mt19937 rng(3);
  const Matrix k = oracle::random_hermitian(4, rng, 0.4);
  EXPECT_LT(max_abs(unitary_log(unitary_exp(k)) - k), 1e-12);
  const Matrix u = oracle::random_unitary(5, rng);
  EXPECT_LT(max_abs(unitary_exp(unitary_log(u)) - u), 1e-12);
}

TEST(Pauli, AlgebraAndKron) {
  EXPECT_LT(max_abs(pauli::x() * pauli::y() - kI * pauli::z()), 1e-15);
  EXPECT_LT(max_abs(pauli::z() * pauli::z() - pauli::identity()), 1e-15);
  const Matrix k = kron(pauli::z(), pauli::x());
  EXPECT_EQ(k.rows(), 4);
  EXPECT_EQ(k(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(k(2, 3), Complex(-1.0, 0.0));
}

TEST(Checks, PhaseDistanceAndAngles) {
  std::mt19937 rng(5);
  const Matrix u = oracle::random_unitary(3, rng);
  EXPECT_LT(distance_up_to_phase(std::polar(1.0, 1.3) * u, u), 1e-14);
  Matrix a = Matrix::Zero(3, 1);
  a(0, 0) = 1.0;
  Matrix b = Matrix::Zero(3, 1);
  b(0, 0) = std::cos(0.3);
  b(1, 0) = std::sin(0.3);
  EXPECT_NEAR(max_principal_angle(a, b), 0.3, 1e-14);
  EXPECT_LT(unitarity_error(orthonormalize(oracle::random_hermitian(4, rng))), 1e-13);
}

TEST(Phases, WrapIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(wrap_phase(-kPi), kPi);
  EXPECT_DOUBLE_EQ(wrap_phase(kPi), kPi);
  EXPECT_NEAR(wrap_phase(3 * kPi + 0.1), -kPi + 0.1, 1e-14);
  EXPECT_NEAR(phase_distance(kPi - 0.01, -kPi + 0.01), 0.02, 1e-14);
}
