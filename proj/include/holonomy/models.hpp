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

#include <functional>
#include <string>
#include <vector>

#include "holonomy/linalg.hpp"

namespace holonomy {

/// A point R in parameter space. Units are model dependent; magnetic field
/// components are angular frequencies (hbar = 1).
using ParameterPoint = RealVector;

/// Closed curve t -> R(t), t in [0, T], sampled at `steps` equally spaced
/// times t_k = k T / steps, k = 0 .. steps-1. Sample `steps` coincides with
/// sample 0 up to `closure_tol`.
class ParameterLoop {
 public:
  using Sampler = std::function<ParameterPoint(double)>;

  ParameterLoop(Sampler sampler, double period, int steps,
                double closure_tol = 1e-12);

  int steps() const { return steps_; }
  double period() const { return period_; }
  double closure_tol() const { return closure_tol_; }
  double dt() const { return period_ / steps_; }
  double time(int k) const { return period_ * k / steps_; }

  ParameterPoint at(double t) const { return sampler_(t); }
  /// Sample k, periodic in k.
  ParameterPoint sample(int k) const;
  /// dR/dt at sample k by central differences on the samples.
  ParameterPoint tangent(int k) const;

  /// Same curve, different sample count.
  ParameterLoop resampled(int steps) const;

 private:
  Sampler sampler_;
  double period_;
  int steps_;
  double closure_tol_;
};

struct LevelMultiplicity {
  int level;  ///< index of the energy level in ascending order of distinct levels
  int multiplicity;
};

/// Map R -> H(R) with its declared degeneracy structure.
struct ParametricHamiltonian {
  std::string name;
  int dim = 0;
  int parameter_dim = 0;
  std::function<HermitianMatrix(const ParameterPoint&)> eval;
  std::vector<LevelMultiplicity> degeneracies;

  HermitianMatrix operator()(const ParameterPoint& r) const { return eval(r); }
};

// ---- spin 1/2 ------------------------------------------------------------

/// H = (1/2) B . sigma, so the splitting equals |B|.
HermitianMatrix spin_half_hamiltonian(const Eigen::Vector3d& field);

/// Parameter point is the field B.
ParametricHamiltonian spin_half_model();

/// B(t) = |B| (sin theta cos w t, sin theta sin w t, cos theta), T = 2 pi / |w|.
ParameterLoop latitude_loop(double theta, double omega_r, int steps,
                            double magnitude = 1.0);

/// Constant longitudinal field plus a circularly polarized transverse field:
/// B(t) = (w_perp cos(w_R t + phase0), w_perp sin(w_R t + phase0), w_par).
ParameterLoop circular_drive_loop(double omega_parallel, double omega_perp,
                                  double omega_r, int steps,
                                  double phase0 = 0.0);

// ---- two coupled spins ---------------------------------------------------

struct SpinRegisterSpec {
  double omega01 = 1.0;  ///< Larmor frequency of qubit 1 (rad/s)
  double omega02 = 0.8;  ///< Larmor frequency of qubit 2 (rad/s)
  double J = 0.0;        ///< Ising coupling (rad/s)
  double omega1 = 0.1;   ///< transverse Rabi frequency (rad/s)
  double omega_r = 0.05; ///< rotation frequency of the transverse field (rad/s)

  void validate() const;
};

/// H = (1/2) B1.sigma (x) 1 + 1 (x) (1/2) B2.sigma + (J/4) sz (x) sz.
/// Parameter point is (B1, B2), six components; qubit 1 is the left factor.
ParametricHamiltonian two_spin_hamiltonian(const SpinRegisterSpec& spec);

/// B_a(t) = (w1 cos w_R t, w1 sin w_R t, w0a) for both qubits.
ParameterLoop two_spin_loop(const SpinRegisterSpec& spec, int steps);

// ---- spin 3/2 ------------------------------------------------------------

/// Angular momentum for spin 3/2 in the block basis
/// |3/2>, |-3/2>, |1/2>, |-1/2>.
struct Spin32Generators {
  Matrix4 J1;
  Matrix4 J2;
  Matrix4 J3;
};

const Spin32Generators& spin32_generators();

struct QuadrupoleSpec {
  double omega0 = 1.0;  ///< quadrupole frequency (rad/s)
  double omega1 = 0.1;  ///< rotation frequency (rad/s)
  double theta = 0.5;   ///< tilt of the quadrupole axis (rad)

  void validate() const;
};

/// H0 = w0 (J3^2 - 5/4).
Matrix4 quadrupole_static(const QuadrupoleSpec& spec);

/// e^{-i phi J3} e^{-i theta J2} H0 e^{i theta J2} e^{i phi J3}, phi = w1 t.
HermitianMatrix quadrupole_lab_hamiltonian(const QuadrupoleSpec& spec,
                                           double t);

/// H(phi) = e^{-i phi G} H0 e^{i phi G}. The parameter point is
/// (cos phi, sin phi); e^{-2 pi i G} must be a scalar so H is single valued.
ParametricHamiltonian rotor_model(std::string name, const Matrix& h0,
                                  const Matrix& generator,
                                  std::vector<LevelMultiplicity> degeneracies);

/// Quadrupole in the laboratory frame as a rotor about z. Parameter point is
/// (cos phi, sin phi).
ParametricHamiltonian quadrupole_model(const QuadrupoleSpec& spec);

/// (cos w t, sin w t), T = 2 pi / |w|.
ParameterLoop rotation_loop(double omega, int steps);

// ---- generic three-level system ------------------------------------------

/// Three-level Hermitian template in which only arg H12 is driven.
struct ThreeLevelTemplate {
  double h11 = 0.0, h22 = 0.0, h33 = 0.0;
  double abs12 = 1.0, abs13 = 1.0, abs23 = 1.0;
  double phase13 = 0.0, phase23 = 0.0;

  Matrix matrix(double phase12) const;
};

/// Parameter point is (cos phi12, sin phi12).
ParametricHamiltonian three_level_model(const ThreeLevelTemplate& tmpl);

/// phi12(t) = start + 2 pi winding t, t in [0, 1].
ParameterLoop phase_loop(double start, int winding, int steps);

}  // namespace holonomy
