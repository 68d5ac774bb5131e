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

#include "holonomy/nonabelian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

std::vector<int> complement(int n, const std::vector<int>& anchors) {
  std::vector<int> rest;
  for (int i = 0; i < n; ++i) {
    if (std::find(anchors.begin(), anchors.end(), i) == anchors.end()) {
      rest.push_back(i);
    }
  }
  return rest;
}

Matrix perp_block(const Matrix& h, double energy, const std::vector<int>& rest) {
  const int m = static_cast<int>(rest.size());
  Matrix out(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) out(i, j) = h(rest[i], rest[j]);
  }
  out.diagonal().array() -= energy;
  return out;
}

double spectral_norm(const Matrix& h) {
  return eigh(h).values.cwiseAbs().maxCoeff();
}

Matrix upper_inverse(const Matrix& r) {
  return r.triangularView<Eigen::Upper>().solve(
      Matrix::Identity(r.rows(), r.cols()));
}

Matrix cholesky_upper(const Matrix& gram) {
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) {
    fail(ErrorCode::InvariantViolated, "Gram matrix is not positive definite");
  }
  return llt.matrixU();
}

void check_compatible(const DegenerateFrame& a, const DegenerateFrame& b) {
  if (a.multiplicity() != b.multiplicity() ||
      (a.level >= 0 && b.level >= 0 && a.level != b.level)) {
    fail(ErrorCode::LevelMismatch, "frames belong to different levels");
  }
  if (a.anchors != b.anchors || a.raw.rows() != b.raw.rows()) {
    fail(ErrorCode::InvalidArgument, "frames use different anchors");
  }
}

double min_column_overlap(const DegenerateFrame& a, const DegenerateFrame& b) {
  double lowest = 1.0;
  for (Eigen::Index c = 0; c < a.frame.cols(); ++c) {
    lowest = std::min(lowest, std::abs(b.frame.col(c).dot(a.frame.col(c))));
  }
  return lowest;
}

MatrixConnectionSample finish(const Matrix& projected, double overlap) {
  // projected = <zbar | dz>; A_ab = i (zbar^dagger dz)_{ba}.
  const Matrix a = kI * projected.transpose();
  MatrixConnectionSample out;
  out.a = 0.5 * (a + a.adjoint());
  out.skew_residue = 0.5 * max_abs(a - a.adjoint());
  out.min_overlap = overlap;
  return out;
}

}  // namespace

std::vector<int> best_anchor_set(const Matrix& h, double energy,
                                 int multiplicity) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> best;
  double best_det = -1.0;
  // Enumerate subsets starting from the default (last indices) so that near
  // ties keep it.
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - multiplicity, pick.end(), true);
  const std::vector<bool> first = pick;
  do {
    std::vector<int> anchors;
    for (int i = 0; i < n; ++i) {
      if (pick[i]) anchors.push_back(i);
    }
    const double det =
        std::abs(perp_block(h, energy, complement(n, anchors)).determinant());
    if (det > best_det * (1.0 + 1e-9)) {
      best_det = det;
      best = anchors;
    }
    std::next_permutation(pick.begin(), pick.end());
  } while (pick != first);
  return best;
}

DegenerateFrame degenerate_frame(const HermitianMatrix& h, double energy,
                                 int multiplicity, std::vector<int> anchors,
                                 double cond_tol, int level) {
  const Matrix& m = h.matrix();
  const int n = static_cast<int>(m.rows());
  if (multiplicity < 1 || multiplicity >= n) {
    fail(ErrorCode::InvalidArgument, "multiplicity must lie in [1, n)");
  }
  if (anchors.empty()) {
    for (int i = n - multiplicity; i < n; ++i) anchors.push_back(i);
  }
  if (static_cast<int>(anchors.size()) != multiplicity) {
    fail(ErrorCode::InvalidArgument, "need one anchor per degenerate vector");
  }
  for (int a : anchors) {
    if (a < 0 || a >= n) fail(ErrorCode::InvalidArgument, "anchor out of range");
  }
  const double norm = spectral_norm(m);
  if (cond_tol < 0.0) cond_tol = 1e-8 * std::pow(norm, n - multiplicity);

  const std::vector<int> rest = complement(n, anchors);
  if (static_cast<int>(rest.size()) != n - multiplicity) {
    fail(ErrorCode::InvalidArgument, "anchors must be distinct");
  }
  Eigen::PartialPivLU<Matrix> lu(perp_block(m, energy, rest));
  if (std::abs(lu.determinant()) < cond_tol) {
    fail(ErrorCode::PivotSingular, "|det(H_perp - E)| below threshold");
  }
  Matrix coupling(n - multiplicity, multiplicity);
  for (int i = 0; i < n - multiplicity; ++i) {
    for (int a = 0; a < multiplicity; ++a) coupling(i, a) = -m(rest[i], anchors[a]);
  }

  DegenerateFrame f;
  f.level = level;
  f.energy = energy;
  f.anchors = anchors;
  f.zeta = lu.solve(coupling);
  f.raw = Matrix::Zero(n, multiplicity);
  for (int a = 0; a < multiplicity; ++a) {
    f.raw(anchors[a], a) = 1.0;
    for (int i = 0; i < n - multiplicity; ++i) f.raw(rest[i], a) = f.zeta(i, a);
  }
  const Matrix gram =
      Matrix::Identity(multiplicity, multiplicity) + f.zeta.adjoint() * f.zeta;
  f.chol = cholesky_upper(gram);
  f.frame = f.raw * upper_inverse(f.chol);

  Matrix shifted = m;
  shifted.diagonal().array() -= energy;
  const double residual = max_abs(shifted * f.frame);
  if (residual > 1e-6 * std::max(1.0, norm)) {
    fail(ErrorCode::MultiplicityDrift,
         "E is not a " + std::to_string(multiplicity) +
             "-fold eigenvalue (residual " + std::to_string(residual) + ")");
  }
  return f;
}

MatrixConnectionSample matrix_connection_closed_form(const DegenerateFrame& a,
                                                     const DegenerateFrame& b) {
  check_compatible(a, b);
  const Eigen::Index d = a.multiplicity();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix zmid = 0.5 * (a.zeta + b.zeta);
  const Matrix rinv = upper_inverse(cholesky_upper(id + zmid.adjoint() * zmid));
  // z^dagger dz = R^{-dagger} Z^dagger dZ R^{-1} - dR R^{-1} at the midpoint.
  const Matrix projected = rinv.adjoint() * zmid.adjoint() * (b.zeta - a.zeta) * rinv -
                           (b.chol - a.chol) * rinv;
  return finish(projected, min_column_overlap(a, b));
}

MatrixConnectionSample matrix_connection_numeric(const DegenerateFrame& a,
                                                 const DegenerateFrame& b) {
  check_compatible(a, b);
  const double overlap = min_column_overlap(a, b);
  if (overlap < 0.5) {
    fail(ErrorCode::FrameDiscontinuity,
         "frame overlap " + std::to_string(overlap) + " between samples");
  }
  const Matrix mid = 0.5 * (a.frame + b.frame);
  return finish(mid.adjoint() * (b.frame - a.frame), overlap);
}

LevelBlock resolve_level(const ParametricHamiltonian& model, int level) {
  if (model.degeneracies.empty()) {
    if (level < 0 || level >= model.dim) {
      fail(ErrorCode::InvalidArgument, "level index out of range");
    }
    return {level, 1};
  }
  LevelBlock block{0, 0};
  for (const LevelMultiplicity& lm : model.degeneracies) {
    if (lm.level == level) {
      block.multiplicity = lm.multiplicity;
      return block;
    }
    block.first += lm.multiplicity;
  }
  fail(ErrorCode::InvalidArgument,
       "model declares no level " + std::to_string(level));
}

RealVector eigenphases(const Matrix& u) {
  Eigen::ComplexEigenSolver<Matrix> solver(u, false);
  RealVector phases(u.rows());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = wrap_phase(std::arg(solver.eigenvalues()(k)));
  }
  std::sort(phases.data(), phases.data() + phases.size());
  return phases;
}

Matrix ordered_product(const std::vector<Matrix>& connections) {
  if (connections.empty()) fail(ErrorCode::InvalidArgument, "empty connection path");
  Matrix u = Matrix::Identity(connections.front().rows(), connections.front().cols());
  for (const Matrix& a : connections) u = u * unitary_exp(a);
  return u;
}

NonAbelianHolonomy holonomy(const ParametricHamiltonian& model,
                            const ParameterLoop& loop, int level,
                            const HolonomyOptions& options) {
  const LevelBlock block = resolve_level(model, level);
  const int d = block.multiplicity;
  if (block.first + d > model.dim) {
    fail(ErrorCode::InvalidArgument, "level block exceeds the dimension");
  }

  struct State {
    HermitianMatrix h;
    double energy = 0.0;
    double norm = 0.0;
  };
  auto solve = [&](int k) {
    State s;
    s.h = model(loop.sample(k));
    const RealVector values = eigh(s.h.matrix()).values;
    const auto seg = values.segment(block.first, d);
    s.energy = seg.mean();
    s.norm = values.cwiseAbs().maxCoeff();
    const double spread = seg.maxCoeff() - seg.minCoeff();
    if (spread > options.degeneracy_tol * std::max(1.0, s.norm)) {
      fail(ErrorCode::MultiplicityDrift,
           "level splits by " + std::to_string(spread) + " at sample " +
               std::to_string(k));
    }
    const bool below = block.first > 0 &&
                       s.energy - values(block.first - 1) < options.gap_tol;
    const bool above = block.first + d < values.size() &&
                       values(block.first + d) - s.energy < options.gap_tol;
    if (below || above) {
      fail(ErrorCode::MultiplicityDrift,
           "gap to a neighbouring level closes at sample " + std::to_string(k));
    }
    return s;
  };
  auto tol_of = [&](const State& s) {
    return options.cond_tol_scale * std::pow(s.norm, model.dim - d);
  };
  auto det_of = [&](const State& s, const std::vector<int>& anchors) {
    return std::abs(perp_block(s.h.matrix(), s.energy,
                               complement(model.dim, anchors))
                        .determinant());
  };

  NonAbelianHolonomy out;
  out.multiplicity = d;
  const State start = solve(0);
  std::vector<int> anchors;
  for (int i = model.dim - d; i < model.dim; ++i) anchors.push_back(i);
  if (det_of(start, anchors) < tol_of(start)) {
    anchors = best_anchor_set(start.h.matrix(), start.energy, d);
  }
  out.start_anchors = anchors;

  DegenerateFrame current =
      degenerate_frame(start.h, start.energy, d, anchors, tol_of(start), level);
  State previous = start;
  Matrix u = Matrix::Identity(d, d);
  const int n = loop.steps();
  if (options.keep_connections) out.connections.reserve(n);

  for (int k = 0; k < n; ++k) {
    const State next = (k + 1 < n) ? solve(k + 1) : start;
    if (det_of(next, anchors) < tol_of(next)) {
      const std::vector<int> fresh = best_anchor_set(next.h.matrix(), next.energy, d);
      const DegenerateFrame moved = degenerate_frame(
          previous.h, previous.energy, d, fresh, tol_of(previous), level);
      u = u * (current.frame.adjoint() * moved.frame).conjugate();
      current = moved;
      anchors = fresh;
      ++out.pivot_changes;
    }
    const DegenerateFrame upcoming =
        degenerate_frame(next.h, next.energy, d, anchors, tol_of(next), level);
    const MatrixConnectionSample step =
        options.form == ConnectionForm::ClosedForm
            ? matrix_connection_closed_form(current, upcoming)
            : matrix_connection_numeric(current, upcoming);
    if (step.min_overlap < 0.5) {
      fail(ErrorCode::FrameDiscontinuity,
           "frame jumps between samples " + std::to_string(k) + " and " +
               std::to_string(k + 1));
    }
    out.max_skew_residue = std::max(out.max_skew_residue, step.skew_residue);
    out.min_overlap = std::min(out.min_overlap, step.min_overlap);
    u = u * unitary_exp(step.a);
    if (options.keep_connections) out.connections.push_back(step.a);
    current = upcoming;
    previous = next;
  }
  if (anchors != out.start_anchors) {
    const DegenerateFrame home = degenerate_frame(
        start.h, start.energy, d, out.start_anchors, tol_of(start), level);
    u = u * (current.frame.adjoint() * home.frame).conjugate();
  }
  out.u = u;
  out.unitarity_error = unitarity_error(u);
  out.eigenphases = eigenphases(u);
  return out;
}

std::vector<Matrix> gauge_transform(const std::vector<Matrix>& connections,
                                    const std::vector<Matrix>& gauge,
                                    double closure_tol) {
  if (gauge.size() != connections.size() + 1) {
    fail(ErrorCode::InvalidArgument, "gauge needs one sample per loop vertex");
  }
  if (max_abs(gauge.back() - gauge.front()) > closure_tol) {
    fail(ErrorCode::NonClosedGauge, "gauge does not return to its start value");
  }
  std::vector<Matrix> out;
  out.reserve(connections.size());
  for (std::size_t k = 0; k < connections.size(); ++k) {
    const Matrix link =
        gauge[k] * unitary_exp(connections[k]) * gauge[k + 1].adjoint();
    out.push_back(unitary_log(link));
  }
  return out;
}

}  // namespace holonomy
