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

#include "holonomy/models.hpp"

#include <cmath>
#include <utility>

#include "holonomy/errors.hpp"

namespace holonomy {

ParameterLoop::ParameterLoop(Sampler sampler, double period, int steps,
                             double closure_tol)
    : sampler_(std::move(sampler)),
      period_(period),
      steps_(steps),
      closure_tol_(closure_tol) {
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    fail(ErrorCode::DegenerateLoop, "loop period must be positive and finite");
  }
  if (steps_ < 8) {
    fail(ErrorCode::InvalidArgument, "a loop needs at least 8 samples");
  }
  const ParameterPoint start = sampler_(0.0);
  const ParameterPoint end = sampler_(period_);
  if (!start.allFinite() || !end.allFinite()) {
    fail(ErrorCode::InvalidArgument, "loop samples must be finite");
  }
  if ((end - start).norm() > closure_tol_) {
    fail(ErrorCode::DegenerateLoop, "loop is not closed: |R(T) - R(0)| = " +
                                        std::to_string((end - start).norm()));
  }
}

ParameterPoint ParameterLoop::sample(int k) const {
  const int wrapped = ((k % steps_) + steps_) % steps_;
  return sampler_(time(wrapped));
}

ParameterPoint ParameterLoop::tangent(int k) const {
  return (sample(k + 1) - sample(k - 1)) / (2.0 * dt());
}

ParameterLoop ParameterLoop::resampled(int steps) const {
  return ParameterLoop(sampler_, period_, steps, closure_tol_);
}

// ---- spin 1/2 ------------------------------------------------------------

HermitianMatrix spin_half_hamiltonian(const Eigen::Vector3d& field) {
  if (!field.allFinite()) {
    fail(ErrorCode::InvalidArgument, "field must be finite");
  }
  Matrix h = 0.5 * (field.x() * pauli::x() + field.y() * pauli::y() +
                    field.z() * pauli::z());
  return HermitianMatrix(h);
}

ParametricHamiltonian spin_half_model() {
  ParametricHamiltonian model;
  model.name = "spin_half";
  model.dim = 2;
  model.parameter_dim = 3;
  model.eval = [](const ParameterPoint& r) {
    return spin_half_hamiltonian(Eigen::Vector3d(r(0), r(1), r(2)));
  };
  model.degeneracies = {{0, 1}, {1, 1}};
  return model;
}

ParameterLoop latitude_loop(double theta, double omega_r, int steps,
                            double magnitude) {
  if (omega_r == 0.0 || !std::isfinite(omega_r)) {
    fail(ErrorCode::DegenerateLoop, "degenerate loop: rotation frequency is zero");
  }
  if (theta < 0.0 || theta > kPi) {
    fail(ErrorCode::InvalidArgument, "latitude angle must lie in [0, pi]");
  }
  const double st = std::sin(theta);
  const double ct = std::cos(theta);
  auto sampler = [=](double t) {
    ParameterPoint b(3);
    b << magnitude * st * std::cos(omega_r * t),
        magnitude * st * std::sin(omega_r * t), magnitude * ct;
    return b;
  };
  return ParameterLoop(sampler, kTwoPi / std::abs(omega_r), steps,
                       1e-12 * std::max(1.0, std::abs(magnitude)));
}

ParameterLoop circular_drive_loop(double omega_parallel, double omega_perp,
                                  double omega_r, int steps, double phase0) {
  if (omega_r == 0.0 || !std::isfinite(omega_r)) {
    fail(ErrorCode::DegenerateLoop, "degenerate loop: rotation frequency is zero");
  }
  auto sampler = [=](double t) {
    ParameterPoint b(3);
    b << omega_perp * std::cos(omega_r * t + phase0),
        omega_perp * std::sin(omega_r * t + phase0), omega_parallel;
    return b;
  };
  const double scale = std::max({1.0, std::abs(omega_perp)});
  return ParameterLoop(sampler, kTwoPi / std::abs(omega_r), steps,
                       1e-12 * scale);
}

// ---- two coupled spins ---------------------------------------------------

void SpinRegisterSpec::validate() const {
  for (double v : {omega01, omega02, J, omega1, omega_r}) {
    if (!std::isfinite(v)) {
      fail(ErrorCode::InvalidArgument, "spin register frequencies must be finite");
    }
  }
  if (omega01 == omega02) {
    fail(ErrorCode::InvalidArgument, "the two spins must not be identical");
  }
}

ParametricHamiltonian two_spin_hamiltonian(const SpinRegisterSpec& spec) {
  spec.validate();
  const Matrix one = Matrix2::Identity();
  const Matrix sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  const Matrix zz = kron(sz, sz);
  const double coupling = spec.J;
  ParametricHamiltonian model;
  model.name = "two_spin";
  model.dim = 4;
  model.parameter_dim = 6;
  model.eval = [=](const ParameterPoint& r) {
    const Matrix b1 = r(0) * sx + r(1) * sy + r(2) * sz;
    const Matrix b2 = r(3) * sx + r(4) * sy + r(5) * sz;
    Matrix h = 0.5 * kron(b1, one) + 0.5 * kron(one, b2) + 0.25 * coupling * zz;
    return HermitianMatrix(h);
  };
  model.degeneracies = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  return model;
}

ParameterLoop two_spin_loop(const SpinRegisterSpec& spec, int steps) {
  spec.validate();
  if (spec.omega_r == 0.0) {
    fail(ErrorCode::DegenerateLoop, "degenerate loop: rotation frequency is zero");
  }
  auto sampler = [spec](double t) {
    const double c = std::cos(spec.omega_r * t);
    const double s = std::sin(spec.omega_r * t);
    ParameterPoint r(6);
    r << spec.omega1 * c, spec.omega1 * s, spec.omega01, spec.omega1 * c,
        spec.omega1 * s, spec.omega02;
    return r;
  };
  return ParameterLoop(sampler, kTwoPi / std::abs(spec.omega_r), steps,
                       1e-12 * std::max(1.0, std::abs(spec.omega1)));
}

// ---- spin 3/2 ------------------------------------------------------------

const Spin32Generators& spin32_generators() {
  static const Spin32Generators generators = [] {
    const double r3 = std::sqrt(3.0) / 2.0;
    Spin32Generators g;
    g.J3.setZero();
    g.J3.diagonal() << 1.5, -1.5, 0.5, -0.5;
    // Block forms [[0, (sqrt3/2) 1], [(sqrt3/2) 1, s1]] and
    // [[0, -i (sqrt3/2) s3], [i (sqrt3/2) s3, s2]].
    g.J1.setZero();
    g.J1.block<2, 2>(0, 2) = r3 * Matrix2::Identity();
    g.J1.block<2, 2>(2, 0) = r3 * Matrix2::Identity();
    g.J1.block<2, 2>(2, 2) = pauli::x();
    g.J2.setZero();
    g.J2.block<2, 2>(0, 2) = -kI * r3 * pauli::z();
    g.J2.block<2, 2>(2, 0) = kI * r3 * pauli::z();
    g.J2.block<2, 2>(2, 2) = pauli::y();
    return g;
  }();
  return generators;
}

void QuadrupoleSpec::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
    fail(ErrorCode::InvalidArgument, "quadrupole frequency must be positive");
  }
  if (!std::isfinite(omega1)) {
    fail(ErrorCode::InvalidArgument, "rotation frequency must be finite");
  }
  if (!(theta >= 0.0 && theta < kPi / 2.0)) {
    fail(ErrorCode::InvalidArgument, "tilt angle must lie in [0, pi/2)");
  }
}

Matrix4 quadrupole_static(const QuadrupoleSpec& spec) {
  const Matrix4& j3 = spin32_generators().J3;
  return spec.omega0 * (j3 * j3 - 1.25 * Matrix4::Identity());
}

HermitianMatrix quadrupole_lab_hamiltonian(const QuadrupoleSpec& spec,
                                           double t) {
  spec.validate();
  const auto& g = spin32_generators();
  const Matrix rot =
      evolve_exp(g.J3, spec.omega1 * t) * evolve_exp(g.J2, spec.theta);
  return HermitianMatrix(rot * quadrupole_static(spec) * rot.adjoint());
}

ParametricHamiltonian rotor_model(std::string name, const Matrix& h0,
                                  const Matrix& generator,
                                  std::vector<LevelMultiplicity> degeneracies) {
  HermitianMatrix checked_h0(h0);
  HermitianMatrix checked_g(generator);
  const Matrix full_turn = evolve_exp(checked_g.matrix(), kTwoPi);
  const Complex scalar = full_turn(0, 0);
  if (max_abs(full_turn - scalar * Matrix::Identity(h0.rows(), h0.cols())) >
      1e-9) {
    fail(ErrorCode::InvalidArgument,
         "rotor generator must satisfy e^{-2 pi i G} = const * I");
  }
  const Spectrum gen = eigh(checked_g.matrix());
  ParametricHamiltonian model;
  model.name = std::move(name);
  model.dim = static_cast<int>(h0.rows());
  model.parameter_dim = 2;
  model.eval = [h = checked_h0.matrix(), gen](const ParameterPoint& r) {
    const double phi = std::atan2(r(1), r(0));
    Vector phases(gen.values.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
      phases(k) = std::polar(1.0, -phi * gen.values(k));
    }
    const Matrix rot = gen.vectors * phases.asDiagonal() * gen.vectors.adjoint();
    return HermitianMatrix(rot * h * rot.adjoint());
  };
  model.degeneracies = std::move(degeneracies);
  return model;
}

ParametricHamiltonian quadrupole_model(const QuadrupoleSpec& spec) {
  spec.validate();
  const auto& g = spin32_generators();
  const Matrix tilt = evolve_exp(g.J2, spec.theta);
  const Matrix h0 = tilt * quadrupole_static(spec) * tilt.adjoint();
  return rotor_model("quadrupole", h0, g.J3, {{0, 2}, {1, 2}});
}

ParameterLoop rotation_loop(double omega, int steps) {
  if (omega == 0.0 || !std::isfinite(omega)) {
    fail(ErrorCode::DegenerateLoop, "degenerate loop: rotation frequency is zero");
  }
  auto sampler = [omega](double t) {
    ParameterPoint r(2);
    r << std::cos(omega * t), std::sin(omega * t);
    return r;
  };
  return ParameterLoop(sampler, kTwoPi / std::abs(omega), steps, 1e-12);
}

// ---- generic three-level system ------------------------------------------

Matrix ThreeLevelTemplate::matrix(double phase12) const {
  Matrix h(3, 3);
  const Complex h12 = std::polar(abs12, phase12);
  const Complex h13 = std::polar(abs13, phase13);
  const Complex h23 = std::polar(abs23, phase23);
  h << h11, h12, h13, std::conj(h12), h22, h23, std::conj(h13), std::conj(h23),
      h33;
  return h;
}

ParametricHamiltonian three_level_model(const ThreeLevelTemplate& tmpl) {
  ParametricHamiltonian model;
  model.name = "three_level";
  model.dim = 3;
  model.parameter_dim = 2;
  model.eval = [tmpl](const ParameterPoint& r) {
    return HermitianMatrix(tmpl.matrix(std::atan2(r(1), r(0))));
  };
  model.degeneracies = {{0, 1}, {1, 1}, {2, 1}};
  return model;
}

ParameterLoop phase_loop(double start, int winding, int steps) {
  auto sampler = [=](double t) {
    ParameterPoint r(2);
    const double phi = start + kTwoPi * winding * t;
    r << std::cos(phi), std::sin(phi);
    return r;
  };
  return ParameterLoop(sampler, 1.0, steps, 1e-12);
}

}  // namespace holonomy
