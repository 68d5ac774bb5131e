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

#include <vector>

#include "holonomy/linalg.hpp"
#include "holonomy/models.hpp"

namespace holonomy {

// Abelian (non-degenerate) adiabatic phase from the Hamiltonian matrix
// elements. An eigenvector with energy E is written in uniform coordinates
//
//   m = (xi, 1) / sqrt(1 + |xi|^2),   xi = (H_perp - E)^{-1} h,  h_i = -H_{i,anchor}
//
// where H_perp drops the anchor row and column. The anchor component of m is
// real and positive, which fixes the gauge. The connection is
//
//   A = (i/2) (xi^* dxi - xi dxi^*) / (1 + |xi|^2).

struct UniformCoordinates {
  int level = -1;
  double energy = 0.0;
  int anchor = -1;  ///< index of the component fixed to 1
  Vector xi;        ///< the n-1 remaining components, in index order

  /// The normalized eigenvector (xi, 1) / sqrt(1 + |xi|^2).
  Vector eigenvector() const;
};

/// |det(H_perp - E)| for the minor that excludes `anchor`.
double minor_determinant(const Matrix& h, double energy, int anchor);

/// Default threshold 1e-8 * ||H||^(n-1) with ||H|| the spectral norm.
double default_cond_tol(const Matrix& h);

/// Candidate anchors sorted by descending |det|; ties keep the default order
/// (last index first).
std::vector<int> ranked_anchors(const Matrix& h, double energy);

/// Throws PivotSingular when |det(H_perp - E)| < cond_tol. A negative
/// cond_tol selects default_cond_tol(H).
UniformCoordinates uniform_coordinates(const HermitianMatrix& h, double energy,
                                       int anchor, int level = -1,
                                       double cond_tol = -1.0);

struct AbelianConnectionSample {
  double value = 0.0;        ///< A contracted with the step, in radians
  double imag_residue = 0.0; ///< |Im| of the complex evaluation
};

/// Midpoint evaluation of the connection between adjacent samples.
AbelianConnectionSample connection_increment(const UniformCoordinates& a,
                                             const UniformCoordinates& b);

/// A cyclic phase with its multiplicity. gamma = principal + 2 pi winding.
struct AbelianHolonomy {
  double gamma = 0.0;
  int winding = 0;
  double principal = 0.0;  ///< in (-pi, pi]

  static AbelianHolonomy from_total(double gamma);
};

enum class EnergyPolicy {
  Constant,      ///< E solved once at the start; drift beyond drift_tol is an error
  Instantaneous, ///< E re-solved at every sample and tracked by continuation
};

enum class PivotPolicy {
  Auto,   ///< best minor at the start, re-selected when it turns singular
  Fixed,  ///< always `fixed_anchor`; a singular minor is an error
};

struct BerryOptions {
  double gap_tol = 1e-6;
  double cond_tol_scale = 1e-8;
  double drift_tol = 1e-8;
  EnergyPolicy energy = EnergyPolicy::Constant;
  PivotPolicy pivot = PivotPolicy::Auto;
  int fixed_anchor = -1;  ///< -1 means the last index
  bool record_trace = false;
};

struct ConnectionTraceRow {
  int step = 0;
  double t = 0.0;
  ParameterPoint r;
  double increment = 0.0;
  double cumulative = 0.0;
};

struct BerryResult {
  AbelianHolonomy holonomy;
  int start_anchor = -1;
  int pivot_changes = 0;
  double max_imag_residue = 0.0;
  double max_energy_drift = 0.0;
  double min_gap = 0.0;
  std::vector<ConnectionTraceRow> trace;
};

/// Berry phase of non-degenerate level `level` (ascending order) around the
/// loop, by summing midpoint connection increments.
BerryResult berry_phase(const ParametricHamiltonian& model,
                        const ParameterLoop& loop, int level,
                        const BerryOptions& options = {});

/// gamma_{+-} = -+ Omega(C) / 2 with the solid angle from the spherical
/// excess of the sampled field directions (sign = +1 for the upper level).
/// The solid angle is measured from the north pole, so every sample must stay
/// pole_tol away from the south pole.
AbelianHolonomy two_level_closed_form(const ParameterLoop& field_loop, int sign,
                                      double pole_tol = 1e-6);

/// Oriented solid angle enclosed by the sampled directions, seen from +z.
double solid_angle(const ParameterLoop& field_loop, double pole_tol = 1e-6);

// ---- three-level closed form ----------------------------------------------

/// Coefficients in the grouping C_k [A - D_k ...] for the three-level system
/// at one value of phi12.
struct ThreeLevelCoefficients {
  double energy = 0.0;
  double delta0 = 0.0;
  Complex delta1;
  Complex delta2;
  double c = 0.0;  ///< |H13||H23||H12| / (D0^2 + |D1|^2 + |D2|^2)
  double a = 0.0;  ///< 1/|H13|^2 - 1/|H23|^2
  double d = 0.0;  ///< H11 + H22 - 2 E
  double denergy = 0.0;  ///< dE/dphi12
  double density = 0.0;  ///< A_phi12, connection per unit phi12
};

/// Eigenvalues of a 3x3 Hermitian matrix from the trigonometric solution of
/// the characteristic cubic, ascending.
Eigen::Vector3d three_level_energies(const Matrix& h);

ThreeLevelCoefficients three_level_coefficients(const ThreeLevelTemplate& tmpl,
                                                int level, double phase12);

struct ThreeLevelResult {
  AbelianHolonomy holonomy;
  ThreeLevelCoefficients at_start;
  double min_abs_delta0 = 0.0;
};

/// Berry phase of level k when phi12 runs from `start` through `winding` full
/// turns. The connection density is evaluated in closed form from
/// xi = (Delta1, Delta2) / Delta0 and integrated with the periodic trapezoid
/// rule on `nodes` points.
ThreeLevelResult three_level_closed_form(const ThreeLevelTemplate& tmpl,
                                         int level, double start, int winding,
                                         int nodes = 2048,
                                         double delta0_tol = 1e-10);

// ---- three-element algebras -----------------------------------------------

enum class Algebra { su2, su11, hw };

struct AlgebraFormPath {
  Algebra algebra = Algebra::su2;
  std::vector<Complex> xi;  ///< closed path, sample N coincides with sample 0
  double m = 0.5;           ///< eigenvalue of X3
};

/// gamma = m * sum over steps of -i * omega(xi) with
/// omega = (xi dxi^* - xi^* dxi) / (1 +- |xi|^2) (no denominator for hw).
/// With m = 1/2 and the su2 form this equals the loop integral of the
/// uniform-coordinate connection.
AbelianHolonomy algebra_phase(const AlgebraFormPath& path);

// ---- curvature oracle -----------------------------------------------------

/// Curvature 2-form F_ij = -2 Im sum_{m != n} <n|d_i H|m><m|d_j H|n> / (E_m - E_n)^2
/// at R, with d_i H from central differences of step `fd_step`.
RealMatrix curvature_oracle(const ParametricHamiltonian& model,
                            const ParameterPoint& r, int level,
                            double fd_step = 1e-5, double gap_tol = 1e-8);

/// (F_yz, F_zx, F_xy) for a three-parameter model.
Eigen::Vector3d curvature_vector(const RealMatrix& f);

}  // namespace holonomy
