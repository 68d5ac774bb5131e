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

#include "holonomy/abelian.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/nonadiabatic.hpp"
#include "holonomy/propagator.hpp"
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

struct Drive {
  double par = 0.8, perp = 0.6, w_r = 0.5;
  double period() const { return kTwoPi / std::abs(w_r); }
  ParameterLoop loop() const { return circular_drive_loop(par, perp, w_r, 64); }
};

double rabi_error(const Drive& d, int steps) {
  const PropagationResult r = propagate(spin_half_model(), d.loop(), d.period(), steps);
  const Matrix2 exact = rabi_evolution(d.par, d.perp, d.w_r, {1.0, 0.0}, d.period());
  return max_abs(r.u - exact);
}

}  // namespace

TEST(Propagate, ConstantHamiltonianIsExponential) {
  const ParameterLoop loop = latitude_loop(0.0, 1.0, 16, 1.7);
  const PropagationResult r = propagate(spin_half_model(), loop, 3.3, 100);
  const Matrix h = spin_half_hamiltonian({0.0, 0.0, 1.7}).matrix();
  EXPECT_LE(max_abs(r.u - oracle::taylor_exp(Complex(0.0, -3.3) * h)), 1e-10);
  EXPECT_EQ(r.energies.rows(), 101);
}

TEST(Propagate, OneMillionStepsMatchRabiAndStayUnitary) {
  const Drive d;
  const PropagationResult r = propagate(spin_half_model(), d.loop(), d.period(), 1000000);
  EXPECT_LE(r.unitarity_error, 1e-9);
  const Matrix2 exact = rabi_evolution(d.par, d.perp, d.w_r, {1.0, 0.0}, d.period());
  EXPECT_LE(max_abs(r.u - exact), 1e-9);

  // Exact split of the one-cycle phase along the effective-field eigenvectors.
  const double theta = std::atan2(d.perp, d.par);
  const double omega = std::hypot(d.par, d.perp);
  const EffectiveAngle e = effective_angle(theta, d.w_r, omega, polarization_of(d.w_r));
  const Spectrum eff = eigh(spin_half_hamiltonian({d.perp, 0.0, d.par - d.w_r}).matrix());
  for (int idx = 0; idx < 2; ++idx) {
    const PhasePair p = cycle_phases(idx == 1 ? 0.5 : -0.5, theta, e.theta_star, omega, d.w_r);
    const Vector v = eff.vectors.col(idx);
    const Complex direct = v.dot(r.u * v);
    EXPECT_NEAR(std::abs(direct), 1.0, 1e-9);
    EXPECT_LE(oracle::wrapped_diff(std::arg(direct), -p.phi_d + p.gamma_pole), 1e-9);
  }
}

TEST(Propagate, SecondOrderConvergence) {
  const Drive d{0.8, 0.6, -1.3};
  const double e1 = rabi_error(d, 400), e2 = rabi_error(d, 800), e3 = rabi_error(d, 1600);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
  EXPECT_NEAR(e2 / e3, 4.0, 0.4);
}

TEST(Propagate, RejectsCoarseSteps) {
  const ParameterLoop loop = latitude_loop(0.5, 1.0, 32);
  EXPECT_EQ(code_of([&] { propagate(spin_half_model(), loop, 100.0, 10); }),
            ErrorCode::StepTooCoarse);
  PropagateOptions tight;
  tight.max_step_norm = 1e-3;
  EXPECT_EQ(code_of([&] { propagate(spin_half_model(), loop, 1.0, 100, tight); }),
            ErrorCode::StepTooCoarse);
  EXPECT_EQ(code_of([&] { propagate(spin_half_model(), loop, -1.0, 100); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { propagate(spin_half_model(), loop, 1.0, 0); }),
            ErrorCode::InvalidArgument);
}

TEST(Propagate, RecordsSamples) {
  PropagateOptions o;
  o.record_every = 25;
  const PropagationResult r =
      propagate(spin_half_model(), latitude_loop(0.5, 1.0, 32), 2.0, 100, o);
  ASSERT_EQ(r.samples.size(), 5u);
  EXPECT_DOUBLE_EQ(r.sample_times.back(), 2.0);
  EXPECT_LE(max_abs(r.samples.back() - r.u), 0.0);
}

TEST(Extract, StaticHamiltonianHasNoGeometricPhase) {
  const ParameterLoop loop = latitude_loop(0.0, 1.0, 16);
  const PropagationResult r = propagate(spin_half_model(), loop, 5.0, 200);
  for (int level : {0, 1}) {
    const PhaseExtraction p = extract_geometric_phase(r, spin_half_model(), loop, level);
    EXPECT_LE(std::abs(p.gamma), 1e-12);
    EXPECT_LE(p.leakage, 1e-12);
    EXPECT_NEAR(p.dynamic, (level == 1 ? 0.5 : -0.5) * 5.0, 1e-12);
  }
}

TEST(Extract, LeakageGuard) {
  // One fast turn: far from adiabatic.
  const ParameterLoop loop = latitude_loop(kPi / 3, 1.0, 64);
  const PropagationResult r = propagate(spin_half_model(), loop, 5.0, 2000);
  EXPECT_EQ(code_of([&] { extract_geometric_phase(r, spin_half_model(), loop, 1, 1e-2); }),
            ErrorCode::LeakageExceeded);
  const PhaseExtraction p = extract_geometric_phase(r, spin_half_model(), loop, 1, 1.0);
  EXPECT_GT(p.leakage, 1e-2);
}

TEST(Extract, DegenerateLevelRejected) {
  const ParameterLoop loop = latitude_loop(0.5, 1.0, 16, 0.0);
  const PropagationResult r = propagate(spin_half_model(), loop, 1.0, 10);
  EXPECT_EQ(code_of([&] { extract_geometric_phase(r, spin_half_model(), loop, 0); }),
            ErrorCode::LevelCrossing);
  EXPECT_EQ(code_of([&] { extract_geometric_phase(r, spin_half_model(), loop, 2); }),
            ErrorCode::InvalidArgument);
}

TEST(Sweep, LatitudeApproachesSolidAngle) {
  const double theta = kPi / 3;
  const ParameterLoop loop = latitude_loop(theta, 1.0, 4000);
  const double reference = berry_phase(spin_half_model(), loop, 1).holonomy.gamma;
  EXPECT_LE(oracle::wrapped_diff(reference, -kPi / 2), 1e-6);
  const std::vector<double> durations = {10 * kTwoPi, 100 * kTwoPi, 1000 * kTwoPi};
  const SweepTable t = adiabatic_sweep(spin_half_model(), loop, 1, durations, reference);
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    EXPECT_LT(t.rows[i].error, t.rows[i - 1].error);
    EXPECT_LT(t.rows[i].leakage, t.rows[i - 1].leakage);
  }
  // Leading correction is first order in r = 2 pi / (|B| T): (pi / 2) r sin^2 theta.
  for (const SweepRow& row : t.rows) {
    const double r = kTwoPi / row.duration;
    EXPECT_NEAR(row.error, 0.5 * kPi * r * std::pow(std::sin(theta), 2), r * r);
  }
  EXPECT_NEAR(t.error_exponent, -1.0, 0.05);
  EXPECT_LT(t.leakage_exponent, -1.5);
}

TEST(Sweep, TrivialLoopGivesZeros) {
  const ParameterLoop loop = latitude_loop(0.0, 1.0, 32);
  const SweepTable t = adiabatic_sweep(spin_half_model(), loop, 0, {5.0, 50.0, 500.0}, 0.0);
  for (const SweepRow& row : t.rows) {
    EXPECT_LE(row.error, 1e-10);
    EXPECT_LE(row.leakage, 1e-12);
  }
}

TEST(Sweep, ThreadsDoNotChangeResults) {
  const ParameterLoop loop = latitude_loop(0.8, -1.0, 256);
  const std::vector<double> durations = {20.0, 40.0, 80.0, 160.0};
  SweepOptions one, many;
  many.threads = 3;
  const SweepTable a = adiabatic_sweep(spin_half_model(), loop, 0, durations, 0.3, one);
  const SweepTable b = adiabatic_sweep(spin_half_model(), loop, 0, durations, 0.3, many);
  for (std::size_t i = 0; i < durations.size(); ++i) {
    EXPECT_EQ(a.rows[i].gamma, b.rows[i].gamma);
    EXPECT_EQ(a.rows[i].steps, b.rows[i].steps);
  }
}

TEST(Sweep, RejectsBadDurations) {
  const ParameterLoop loop = latitude_loop(0.8, 1.0, 32);
  EXPECT_EQ(code_of([&] { adiabatic_sweep(spin_half_model(), loop, 0, {}, 0.0); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { adiabatic_sweep(spin_half_model(), loop, 0, {5.0, 2.0}, 0.0); }),
            ErrorCode::InvalidArgument);
}

TEST(Sweep, LogLogSlope) {
  EXPECT_NEAR(log_log_slope({1.0, 10.0, 100.0}, {3.0, 0.03, 3e-4}), -2.0, 1e-12);
  EXPECT_EQ(log_log_slope({1.0}, {1.0}), 0.0);
}
