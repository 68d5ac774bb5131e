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

// Degenerate levels. For a d-fold eigenvalue E the frame columns are
//
//   x_a = (Z_a, c_a),   Z = (H_perp - E)^{-1} h,
//
// with c_a the standard basis of the d anchor components and h the block of
// -H coupling the remaining rows to the anchors. The orthonormal frame
// z = X R^{-1} comes from the Cholesky factor of the Gram matrix
// Gamma = X^dagger X = I + Z^dagger Z, which is Gram-Schmidt in column order.
// The connection is A_ab = i <z_b | dz_a>.

struct DegenerateFrame {
  int level = -1;
  double energy = 0.0;
  std::vector<int> anchors;  ///< rows fixed to the standard basis
  Matrix zeta;               ///< Z, (n-d) x d
  Matrix raw;                ///< X, n x d
  Matrix chol;               ///< R, upper triangular with X^dagger X = R^dagger R
  Matrix frame;              ///< z, n x d orthonormal

  int multiplicity() const { return static_cast<int>(raw.cols()); }
};

/// Anchors default to the last `multiplicity` indices. A negative cond_tol
/// selects 1e-8 ||H||^(n-d).
DegenerateFrame degenerate_frame(const HermitianMatrix& h, double energy,
                                 int multiplicity, std::vector<int> anchors = {},
                                 double cond_tol = -1.0, int level = -1);

/// Anchor set whose complementary minor has the largest |det|; near ties
/// keep the default (last indices).
std::vector<int> best_anchor_set(const Matrix& h, double energy, int multiplicity);

struct MatrixConnectionSample {
  Matrix a;                   ///< Hermitian d x d increment
  double skew_residue = 0.0;  ///< max |A - A^dagger| / 2 before Hermitization
  double min_overlap = 1.0;   ///< min_a |<z_a(next)|z_a>|
};

/// Evaluates the increment from the Gram data of both samples and of the
/// midpoint Z. With d = 1 this is exactly the Abelian midpoint value.
MatrixConnectionSample matrix_connection_closed_form(const DegenerateFrame& a,
                                                     const DegenerateFrame& b);

/// A_ab = i <(z_b(prev) + z_b(next)) / 2 | z_a(next) - z_a(prev)>.
MatrixConnectionSample matrix_connection_numeric(const DegenerateFrame& a,
                                                 const DegenerateFrame& b);

enum class ConnectionForm { ClosedForm, Numeric };

struct HolonomyOptions {
  double gap_tol = 1e-6;
  double degeneracy_tol = 1e-8;
  double cond_tol_scale = 1e-8;
  ConnectionForm form = ConnectionForm::ClosedForm;
  bool keep_connections = false;
};

/// First eigenvalue index and multiplicity of distinct level `level` as
/// declared by the model.
struct LevelBlock {
  int first = 0;
  int multiplicity = 1;
};

LevelBlock resolve_level(const ParametricHamiltonian& model, int level);

struct NonAbelianHolonomy {
  /// U = exp(i A_0) exp(i A_1) ... exp(i A_{N-1}). Adiabatic coefficients in
  /// the frame evolve as c(T) = U^T c(0) (times the dynamical phase).
  Matrix u;
  int multiplicity = 0;
  double unitarity_error = 0.0;
  int pivot_changes = 0;
  double max_skew_residue = 0.0;
  double min_overlap = 1.0;
  std::vector<int> start_anchors;
  RealVector eigenphases;            ///< sorted, each in (-pi, pi]
  std::vector<Matrix> connections;   ///< per-step increments, when kept
};

NonAbelianHolonomy holonomy(const ParametricHamiltonian& model,
                            const ParameterLoop& loop, int level,
                            const HolonomyOptions& options = {});

/// Ordered product exp(i A_0) ... exp(i A_{N-1}).
Matrix ordered_product(const std::vector<Matrix>& connections);

/// Sorted eigenphases of a unitary matrix.
RealVector eigenphases(const Matrix& u);

/// A' = W A W^dagger + i dW W^dagger on the lattice. `gauge` holds W at the
/// N+1 loop samples; W_N must equal W_0. Each step uses the exact link
/// exp(i A'_k) = W_k exp(i A_k) W_{k+1}^dagger, so the holonomy becomes
/// W_0 U W_0^dagger.
std::vector<Matrix> gauge_transform(const std::vector<Matrix>& connections,
                                    const std::vector<Matrix>& gauge,
                                    double closure_tol = 1e-10);

}  // namespace holonomy
