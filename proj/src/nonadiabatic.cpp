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

#include "holonomy/nonadiabatic.hpp"

#include <algorithm>
#include <cmath>

#include "holonomy/errors.hpp"

namespace holonomy {

Matrix2 coherent_rotation(Complex zeta) {
  const double mod = std::abs(zeta);
  Matrix2 d = Matrix2::Identity() * std::cos(mod);
  if (mod > 0.0) {
    const Complex unit = zeta / mod;
    d(0, 1) = std::sin(mod) * unit;
    d(1, 0) = -std::sin(mod) * std::conj(unit);
  }
  return d;
}

RotatingFrameSolution rotating_frame_solution(double omega_parallel,
                                              double omega_perp, double omega_r,
                                              const Eigen::Vector2d& n, double t) {
  if (std::abs(n.norm() - 1.0) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "transverse direction must be a unit vector");
  }
  RotatingFrameSolution s;
  s.delta_omega = omega_parallel - omega_r;
  s.omega = std::hypot(s.delta_omega, omega_perp);
  if (!(s.omega > 0.0)) {
    fail(ErrorCode::InvalidArgument, "effective Rabi frequency must be positive");
  }
  const double half = 0.5 * s.omega * t;
  const double sn = std::sin(half);
  const double cs = std::cos(half);
  const double phi_n = std::atan2(n(1), n(0));
  s.alpha = std::atan2(s.delta_omega / s.omega * sn, cs);
  s.phi = -omega_r * t - 2.0 * s.alpha;
  const double amplitude = std::clamp(std::abs(omega_perp * sn) / s.omega, 0.0, 1.0);
  double arg = -omega_r * t - s.alpha - 0.5 * kPi - phi_n;
  if (omega_perp * sn < 0.0) arg += kPi;
  s.zeta = std::polar(std::asin(amplitude), arg);
  Matrix2 phase = Matrix2::Zero();
  phase(0, 0) = std::polar(1.0, 0.5 * s.phi);
  phase(1, 1) = std::polar(1.0, -0.5 * s.phi);
  s.u = coherent_rotation(s.zeta) * phase;
  return s;
}

Matrix2 rabi_evolution(double omega_parallel, double omega_perp, double omega_r,
                       const Eigen::Vector2d& n, double t) {
  return rotating_frame_solution(omega_parallel, omega_perp, omega_r, n, t).u;
}

int polarization_of(double omega_r) {
  if (omega_r == 0.0) fail(ErrorCode::DegenerateLoop, "rotation frequency is zero");
  return omega_r < 0.0 ? 1 : -1;
}

EffectiveAngle effective_angle(double theta, double omega_r, double omega,
                               int polarization) {
  if (polarization != 1 && polarization != -1) {
    fail(ErrorCode::InvalidArgument, "polarization must be +1 or -1");
  }
  if (!(omega > 0.0)) fail(ErrorCode::InvalidArgument, "Omega must be positive");
  if (theta < 0.0 || theta > kPi) {
    fail(ErrorCode::InvalidArgument, "theta must lie in [0, pi]");
  }
  EffectiveAngle e;
  e.theta = theta;
  e.r = std::abs(omega_r) / omega;
  e.polarization = polarization;
  // sin theta >= 0 keeps atan2 in [0, pi], which is the branch connected to
  // theta* = theta at r = 0.
  e.theta_star = std::atan2(std::sin(theta), std::cos(theta) + polarization * e.r);
  return e;
}

PhasePair cycle_phases(double m, double theta, double theta_star, double omega,
                       double omega_r) {
  if (std::abs(2.0 * m - std::round(2.0 * m)) > 1e-12) {
    fail(ErrorCode::InvalidArgument, "m must be an integer or half-integer");
  }
  PhasePair p;
  p.m = m;
  p.polarization = polarization_of(omega_r);
  const double s = p.polarization;
  p.phi_d = kTwoPi * m * (omega / std::abs(omega_r)) * std::cos(theta - theta_star);
  p.gamma_equator = -kTwoPi * s * m * std::cos(theta_star);
  p.gamma_pole = p.gamma_equator + kTwoPi * s * m;
  p.delta_phi_g = -kTwoPi * s * std::cos(theta_star);
  return p;
}

namespace {

Matrix4 diagonal_gate(double g1, double g2) {
  Matrix4 u = Matrix4::Zero();
  u(0, 0) = std::polar(1.0, g1 + g2);
  u(1, 1) = std::polar(1.0, g1 - g2);
  u(2, 2) = std::polar(1.0, -g1 + g2);
  u(3, 3) = std::polar(1.0, -g1 - g2);
  return u;
}

Matrix4 flip_both() {
  return kron(pauli::x(), pauli::x());
}

}  // namespace

TwoQubitGate two_qubit_geometric_gate(const SpinRegisterSpec& spec,
                                      int polarization) {
  spec.validate();
  if (spec.omega01 == spec.omega02) {
    fail(ErrorCode::InvalidArgument, "the two Larmor frequencies must differ");
  }
  const double omega_a = std::hypot(spec.omega01, spec.omega1);
  const double omega_b = std::hypot(spec.omega02, spec.omega1);
  if (!(omega_a > 0.0) || !(omega_b > 0.0)) {
    fail(ErrorCode::InvalidArgument, "Omega_a must be positive");
  }
  TwoQubitGate g;
  g.polarization = polarization;
  g.theta1 = std::acos(std::clamp(spec.omega01 / omega_a, -1.0, 1.0));
  g.theta2 = std::acos(std::clamp(spec.omega02 / omega_b, -1.0, 1.0));
  g.theta1_star = effective_angle(g.theta1, spec.omega_r, omega_a, polarization).theta_star;
  g.theta2_star = effective_angle(g.theta2, spec.omega_r, omega_b, polarization).theta_star;
  g.gamma1 = -kPi * polarization * std::cos(g.theta1_star);
  g.gamma2 = -kPi * polarization * std::cos(g.theta2_star);
  g.u = diagonal_gate(g.gamma1, g.gamma2);

  const double period_ratio_a = omega_a / std::abs(spec.omega_r);
  const double period_ratio_b = omega_b / std::abs(spec.omega_r);
  const double d1 = kPi * period_ratio_a * std::cos(g.theta1 - g.theta1_star);
  const double d2 = kPi * period_ratio_b * std::cos(g.theta2 - g.theta2_star);
  // phi_d(m) = 2 pi m (...), so m = +-1/2 gives +-d_a.
  g.dynamic = diagonal_gate(-d1, -d2);
  return g;
}

TwoQubitGate dynamic_phase_echo(const TwoQubitGate& gate_loop,
                                const TwoQubitGate& reversed_loop, double tol) {
  if (distance_up_to_phase(reversed_loop.dynamic, gate_loop.dynamic) > tol) {
    fail(ErrorCode::EchoMismatch, "dynamic phases of the two loops differ");
  }
  const Matrix4 x = flip_both();
  TwoQubitGate out = gate_loop;
  out.u = x * reversed_loop.dynamic * reversed_loop.u * x * gate_loop.dynamic *
          gate_loop.u;
  out.dynamic = Matrix4::Identity();
  out.gamma1 = gate_loop.gamma1 - reversed_loop.gamma1;
  out.gamma2 = gate_loop.gamma2 - reversed_loop.gamma2;
  return out;
}

}  // namespace holonomy
