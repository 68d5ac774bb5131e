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

#include "families.hpp"
#include "holonomy/abelian.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/nonabelian.hpp"

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

// Smooth closed gauge W(t) = exp(i sum_k a_k cos kt + b_k sin kt) sampled on
// the loop vertices.
std::vector<Matrix> random_gauge(int d, int steps, std::mt19937& rng) {
  std::vector<Matrix> a, b;
  for (int k = 0; k < 3; ++k) {
    a.push_back(oracle::random_hermitian(d, rng, 0.5));
    b.push_back(oracle::random_hermitian(d, rng, 0.5));
  }
  std::vector<Matrix> out;
  for (int s = 0; s <= steps; ++s) {
    const double t = kTwoPi * (s % steps) / steps;
    Matrix k = Matrix::Zero(d, d);
    for (int j = 0; j < 3; ++j) k += a[j] * std::cos((j + 1) * t) + b[j] * std::sin((j + 1) * t);
    out.push_back(unitary_exp(k));
  }
  return out;
}

}  // namespace

TEST(DegenerateFrame, SpansTheEigenspace) {
  std::mt19937 rng(2);
  const ParametricHamiltonian model = family::six_level(rng);
  ParameterPoint r(2);
  r << std::cos(0.3), std::sin(0.3);
  const HermitianMatrix h = model(r);
  const Spectrum s = eigh(h.matrix());
  const DegenerateFrame f = degenerate_frame(h, 0.5, 3);
  EXPECT_EQ(f.multiplicity(), 3);
  EXPECT_LT(unitarity_error(f.frame), 1e-12);
  EXPECT_LT(max_principal_angle(f.frame, s.vectors.middleCols(2, 3)), 1e-10);
  EXPECT_LT(max_abs(f.raw.adjoint() * f.raw - f.chol.adjoint() * f.chol), 1e-12);
  // Anchor rows of X are the identity.
  for (int i = 0; i < 3; ++i) EXPECT_EQ(f.raw(f.anchors[i], i), Complex(1.0, 0.0));
}

TEST(DegenerateFrame, WrongMultiplicityDrifts) {
  std::mt19937 rng(3);
  const ParametricHamiltonian model = family::four_level(rng);
  ParameterPoint r(2);
  r << 1.0, 0.0;
  const HermitianMatrix h = model(r);
  EXPECT_EQ(code_of([&] { degenerate_frame(h, -1.0, 3); }), ErrorCode::MultiplicityDrift);
  EXPECT_EQ(code_of([&] { degenerate_frame(h, -1.0, 4); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { degenerate_frame(h, -1.0, 2, {1, 1}); }), ErrorCode::InvalidArgument);
}

TEST(DegenerateFrame, SingularAnchorsRaisePivotSingular) {
  // Degenerate block spanned by e0, e1: anchoring on rows 2, 3 is impossible.
  Matrix h = Matrix::Zero(4, 4);
  h.diagonal() << -1.0, -1.0, 1.0, 2.0;
  EXPECT_EQ(code_of([&] { degenerate_frame(HermitianMatrix(h), -1.0, 2, {2, 3}); }),
            ErrorCode::PivotSingular);
  EXPECT_EQ(best_anchor_set(h, -1.0, 2), (std::vector<int>{0, 1}));
}

TEST(ResolveLevel, MapsDistinctLevelsToBlocks) {
  std::mt19937 rng(5);
  const ParametricHamiltonian model = family::six_level(rng);
  EXPECT_EQ(resolve_level(model, 0).first, 0);
  EXPECT_EQ(resolve_level(model, 1).first, 2);
  EXPECT_EQ(resolve_level(model, 1).multiplicity, 3);
  EXPECT_EQ(resolve_level(model, 2).first, 5);
  EXPECT_EQ(code_of([&] { resolve_level(model, 3); }), ErrorCode::InvalidArgument);
}

TEST(MatrixConnection, ClosedFormMatchesNumericPerSample) {
  std::mt19937 rng(8);
  for (int family_size : {4, 6}) {
    const ParametricHamiltonian model =
        family_size == 4 ? family::four_level(rng) : family::six_level(rng);
    const int level = 1;
    const LevelBlock block = resolve_level(model, level);
    // The two discretizations differ at third order in the step.
    const ParameterLoop loop = rotation_loop(1.0, 32000);
    const double e = eigh(model(loop.sample(0)).matrix()).values(block.first);
    double worst = 0.0;
    for (int k = 0; k < 32000; k += 797) {
      const auto fa = degenerate_frame(model(loop.sample(k)), e, block.multiplicity);
      const auto fb = degenerate_frame(model(loop.sample(k + 1)), e, block.multiplicity);
      const auto closed = matrix_connection_closed_form(fa, fb);
      const auto numeric = matrix_connection_numeric(fa, fb);
      worst = std::max(worst, max_abs(closed.a - numeric.a));
      EXPECT_LT(hermiticity_error(closed.a), 1e-15);
    }
    EXPECT_LT(worst, 1e-8) << family_size;
  }
}

TEST(MatrixConnection, DistantFramesAreDiscontinuous) {
  // Lower states of +x and -x fields are orthogonal.
  const auto a = degenerate_frame(spin_half_hamiltonian({1.0, 0.0, 0.0}), -0.5, 1);
  const auto b = degenerate_frame(spin_half_hamiltonian({-1.0, 0.0, 0.0}), -0.5, 1);
  EXPECT_EQ(code_of([&] { matrix_connection_numeric(a, b); }), ErrorCode::FrameDiscontinuity);
  const auto c = degenerate_frame(spin_half_hamiltonian({0.0, 0.0, 1.0}), 0.5, 1, {0});
  EXPECT_EQ(code_of([&] { matrix_connection_numeric(a, c); }), ErrorCode::InvalidArgument);
}

TEST(Holonomy, MatchesWilsonLoopOracle) {
  std::mt19937 rng(13);
  for (int family_size : {4, 6}) {
    const ParametricHamiltonian model =
        family_size == 4 ? family::four_level(rng) : family::six_level(rng);
    for (int level = 0; level < 2; ++level) {
      const LevelBlock block = resolve_level(model, level);
      const int d = block.multiplicity;
      const ParameterLoop loop = rotation_loop(1.0, 4000);
      const NonAbelianHolonomy h = holonomy::holonomy(model, loop, level);
      EXPECT_LT(h.unitarity_error, 1e-10);
      Matrix v0;
      const Matrix w = family::wilson_loop(model, loop, block.first, d, 16000, &v0);
      const double e = eigh(model(loop.sample(0)).matrix()).values(block.first);
      const DegenerateFrame z0 =
          degenerate_frame(model(loop.sample(0)), e, d, h.start_anchors);
      const Matrix s = z0.frame.adjoint() * v0;
      const Matrix expected = (s * w.adjoint() * s.adjoint()).transpose();
      EXPECT_LT(max_abs(h.u - expected), 1e-5) << family_size << " " << level;
    }
  }
}

TEST(Holonomy, NumericAndClosedFormsConvergeTogether) {
  std::mt19937 rng(17);
  const ParametricHamiltonian model = family::six_level(rng);
  HolonomyOptions numeric;
  numeric.form = ConnectionForm::Numeric;
  std::vector<double> gaps;
  for (int steps : {2000, 4000, 8000}) {
    const ParameterLoop loop = rotation_loop(1.0, steps);
    const Matrix a = holonomy::holonomy(model, loop, 1).u;
    const Matrix b = holonomy::holonomy(model, loop, 1, numeric).u;
    gaps.push_back(max_abs(a - b));
  }
  EXPECT_LT(gaps.back(), 2e-5);
  // Second order: halving the step quarters the gap.
  EXPECT_NEAR(gaps[0] / gaps[1], 4.0, 0.2);
  EXPECT_NEAR(gaps[1] / gaps[2], 4.0, 0.2);
}

TEST(Holonomy, TraceIsGaugeInvariant) {
  std::mt19937 rng(19);
  const ParametricHamiltonian model = family::four_level(rng);
  HolonomyOptions keep;
  keep.keep_connections = true;
  const int steps = 2000;
  const NonAbelianHolonomy h = holonomy::holonomy(model, rotation_loop(1.0, steps), 0, keep);
  ASSERT_EQ(static_cast<int>(h.connections.size()), steps);
  EXPECT_LT(max_abs(ordered_product(h.connections) - h.u), 1e-12);
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<Matrix> gauge = random_gauge(2, steps, rng);
    const Matrix u2 = ordered_product(gauge_transform(h.connections, gauge));
    EXPECT_LT(std::abs(u2.trace() - h.u.trace()), 1e-10);
    EXPECT_LT(max_abs(u2 - gauge[0] * h.u * gauge[0].adjoint()), 1e-10);
  }
  std::vector<Matrix> open = random_gauge(2, steps, rng);
  open.back() = unitary_exp(oracle::random_hermitian(2, rng));
  EXPECT_EQ(code_of([&] { gauge_transform(h.connections, open); }), ErrorCode::NonClosedGauge);
}

TEST(Holonomy, GaugeLawInTheContinuum) {
  // A' = W A W^dagger + i dW W^dagger per unit step, to first order.
  std::mt19937 rng(23);
  const Matrix a = oracle::random_hermitian(3, rng, 1e-3);
  const Matrix k = oracle::random_hermitian(3, rng);
  const Matrix dk = oracle::random_hermitian(3, rng, 1e-3);
  const Matrix w0 = unitary_exp(k);
  const Matrix w1 = unitary_exp(k + dk);
  const Matrix got = gauge_transform({a}, {w0, w0}, 1e9).front();
  EXPECT_LT(max_abs(got - w0 * a * w0.adjoint()), 1e-15 + 1e-12);
  const Matrix moved = gauge_transform({a}, {w0, w1}, 1e9).front();
  const Matrix expected = w0 * a * w0.adjoint() + kI * (w1 - w0) * w0.adjoint();
  EXPECT_LT(max_abs(moved - expected), 1e-5);
}

TEST(Holonomy, SingleLevelReducesToAbelian) {
  std::mt19937 rng(29);
  const ParametricHamiltonian model =
      family::engineered({-1.0, 0.3, 1.4}, {0, 1, 3}, {{0, 1}, {1, 1}, {2, 1}}, rng);
  const ParameterLoop loop = rotation_loop(1.0, 1000);
  for (int level = 0; level < 3; ++level) {
    const NonAbelianHolonomy h = holonomy::holonomy(model, loop, level);
    BerryOptions opts;
    opts.pivot = PivotPolicy::Fixed;
    opts.energy = EnergyPolicy::Instantaneous;
    const double gamma = berry_phase(model, loop, level, opts).holonomy.gamma;
    EXPECT_LT(std::abs(h.u(0, 0) - std::polar(1.0, gamma)), 1e-12) << level;
  }
}

TEST(Holonomy, QuadrupoleDoubletsMatchWilsonLoop) {
  QuadrupoleSpec spec{1.0, 0.1, 0.6};
  const ParametricHamiltonian model = quadrupole_model(spec);
  const ParameterLoop loop = rotation_loop(spec.omega1, 4000);
  for (int level = 0; level < 2; ++level) {
    const NonAbelianHolonomy h = holonomy::holonomy(model, loop, level);
    EXPECT_EQ(h.multiplicity, 2);
    EXPECT_LT(h.unitarity_error, 1e-10);
    Matrix v0;
    const Matrix w = family::wilson_loop(model, loop, 2 * level, 2, 16000, &v0);
    const DegenerateFrame z0 = degenerate_frame(model(loop.sample(0)), level == 0 ? -1.0 : 1.0,
                                                2, h.start_anchors);
    const Matrix s = z0.frame.adjoint() * v0;
    EXPECT_LT(max_abs(h.u - (s * w.adjoint() * s.adjoint()).transpose()), 1e-5) << level;
  }
}
