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

// Spin 1/2 in a circularly polarized field
//
//   H(t) = w_par S_z + w_perp (cos(w_R t + phi_n) S_x + sin(w_R t + phi_n) S_y),
//
// which is circular_drive_loop fed through spin_half_model. In the frame
// rotating with the field the Hamiltonian is static, so
//
//   U(t) = e^{-i w_R t S_z} e^{-i (dw S_z + w_perp n.S) t},   dw = w_par - w_R.

/// Coherent-state form U(t) = exp(zeta S+ - zeta^* S-) exp(i phi S_z).
struct RotatingFrameSolution {
  double delta_omega = 0.0;  ///< w_par - w_R
  double omega = 0.0;        ///< sqrt(dw^2 + w_perp^2)
  double alpha = 0.0;        ///< arg of the rotating-frame diagonal element, negated
  Complex zeta;              ///< |zeta| = asin(w_perp |sin(omega t / 2)| / omega)
  double phi = 0.0;          ///< -w_R t - 2 alpha
  Matrix2 u;                 ///< the propagator assembled from zeta and phi
};

RotatingFrameSolution rotating_frame_solution(double omega_parallel,
                                              double omega_perp, double omega_r,
                                              const Eigen::Vector2d& n, double t);

/// Laboratory propagator U(t) in the coherent-state form.
Matrix2 rabi_evolution(double omega_parallel, double omega_perp, double omega_r,
                       const Eigen::Vector2d& n, double t);

/// exp(zeta S+ - zeta^* S-) for spin 1/2.
Matrix2 coherent_rotation(Complex zeta);

/// Polarization +1 rotates the field clockwise about +z (w_R < 0 in
/// circular_drive_loop), -1 counter-clockwise.
struct EffectiveAngle {
  double theta = 0.0;
  double r = 0.0;  ///< |w_R| / Omega
  int polarization = 1;
  double theta_star = 0.0;  ///< in [0, pi]
};

/// tan theta* = sin theta / (cos theta + polarization * r), with the branch
/// continuous in r from theta*(0) = theta. Omega is the field magnitude.
EffectiveAngle effective_angle(double theta, double omega_r, double omega,
                               int polarization);

/// Polarization of a rotation with signed frequency w_R about +z.
int polarization_of(double omega_r);

enum class PhaseConvention {
  Pole,     ///< gamma = 2 pi s m (1 - cos theta*), laboratory frame
  Equator,  ///< gamma = -2 pi s m cos theta*, rotating frame
};

struct PhasePair {
  double m = 0.5;
  int polarization = 1;
  double phi_d = 0.0;          ///< 2 pi m (Omega / |w_R|) cos(theta - theta*)
  double gamma_equator = 0.0;  ///< -2 pi s m cos theta*
  double gamma_pole = 0.0;     ///< gamma_equator + 2 pi s m
  double delta_phi_g = 0.0;    ///< -2 pi s cos theta*, split between m = +-1/2

  double gamma(PhaseConvention c) const {
    return c == PhaseConvention::Pole ? gamma_pole : gamma_equator;
  }
};

/// Phases after one cycle T = 2 pi / |w_R|. With |m*> the eigenstate of the
/// effective rotating-frame field, the laboratory propagator satisfies
/// U(T)|m*> = e^{-i phi_d} e^{i gamma_pole} |m*> and the rotating-frame one
/// e^{-i phi_d} e^{i gamma_equator}.
PhasePair cycle_phases(double m, double theta, double theta_star, double omega,
                       double omega_r);

struct TwoQubitGate {
  Matrix4 u;        ///< geometric part, diagonal
  Matrix4 dynamic;  ///< single-spin dynamic phases e^{-i phi_d}, diagonal
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double theta1 = 0.0, theta2 = 0.0;
  double theta1_star = 0.0, theta2_star = 0.0;
  int polarization = 1;
};

/// diag(e^{i(g1+g2)}, e^{i(g1-g2)}, e^{i(-g1+g2)}, e^{-i(g1+g2)}) with
/// g_a = -pi s cos theta_a*, cos theta_a = w0a / Omega_a and
/// Omega_a^2 = w0a^2 + w1^2. Qubit 1 is the left tensor factor; J only enters
/// the dynamic part, which is not part of the returned gate.
TwoQubitGate two_qubit_geometric_gate(const SpinRegisterSpec& spec,
                                      int polarization = 1);

/// X(x)X (D_b G_b) X(x)X (D_a G_a). With G_b = G_a^dagger (reversed loop)
/// and D_b = D_a the dynamic phases cancel and the geometric ones double.
TwoQubitGate dynamic_phase_echo(const TwoQubitGate& gate_loop,
                                const TwoQubitGate& reversed_loop,
                                double tol = 1e-12);

}  // namespace holonomy
