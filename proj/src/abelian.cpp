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

#include "holonomy/abelian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/LU>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

Matrix drop_index(const Matrix& h, int anchor) {
  const int n = static_cast<int>(h.rows());
  Matrix out(n - 1, n - 1);
  for (int i = 0, r = 0; i < n; ++i) {
    if (i == anchor) continue;
    for (int j = 0, c = 0; j < n; ++j) {
      if (j == anchor) continue;
      out(r, c++) = h(i, j);
    }
    ++r;
  }
  return out;
}

void check_anchor(const Matrix& h, int anchor) {
  if (h.rows() < 2) {
    fail(ErrorCode::InvalidArgument, "uniform coordinates need dimension >= 2");
  }
  if (anchor < 0 || anchor >= h.rows()) {
    fail(ErrorCode::InvalidArgument, "anchor index out of range");
  }
}

double spectral_norm(const RealVector& values) {
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

double cond_tol_for(const RealVector& values, double scale, Eigen::Index n) {
  return scale * std::pow(spectral_norm(values), static_cast<double>(n - 1));
}

}  // namespace

Vector UniformCoordinates::eigenvector() const {
  const Eigen::Index n = xi.size() + 1;
  Vector v(n);
  for (Eigen::Index i = 0, r = 0; i < n; ++i) {
    v(i) = (i == anchor) ? Complex{1.0, 0.0} : xi(r++);
  }
  return v / v.norm();
}

double minor_determinant(const Matrix& h, double energy, int anchor) {
  check_anchor(h, anchor);
  Matrix m = drop_index(h, anchor);
  m.diagonal().array() -= energy;
  return std::abs(m.determinant());
}

double default_cond_tol(const Matrix& h) {
  return cond_tol_for(eigh(h).values, 1e-8, h.rows());
}

std::vector<int> ranked_anchors(const Matrix& h, double energy) {
  const int n = static_cast<int>(h.rows());
  std::vector<int> order(n);
  std::vector<double> det(n);
  for (int k = 0; k < n; ++k) {
    order[k] = n - 1 - k;
    det[k] = minor_determinant(h, energy, k);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return det[a] > det[b]; });
  // Near ties resolve to the default order so that symmetric loops pick a
  // reproducible chart.
  const double best = det[order.front()];
  int preferred = order.front();
  for (int k = n - 1; k >= 0; --k) {
    if (best - det[k] <= 1e-9 * best) {
      preferred = k;
      break;
    }
  }
  std::stable_partition(order.begin(), order.end(),
                        [&](int a) { return a == preferred; });
  return order;
}

UniformCoordinates uniform_coordinates(const HermitianMatrix& h, double energy,
                                       int anchor, int level,
                                       double cond_tol) {
  const Matrix& m = h.matrix();
  check_anchor(m, anchor);
  if (cond_tol < 0.0) cond_tol = default_cond_tol(m);
  Matrix perp = drop_index(m, anchor);
  perp.diagonal().array() -= energy;
  Eigen::PartialPivLU<Matrix> lu(perp);
  if (std::abs(lu.determinant()) < cond_tol) {
    fail(ErrorCode::PivotSingular,
         "|det(H_perp - E)| below threshold for anchor " +
             std::to_string(anchor));
  }
  Vector rhs(m.rows() - 1);
  for (Eigen::Index i = 0, r = 0; i < m.rows(); ++i) {
    if (i != anchor) rhs(r++) = -m(i, anchor);
  }
  UniformCoordinates out;
  out.level = level;
  out.energy = energy;
  out.anchor = anchor;
  out.xi = lu.solve(rhs);
  return out;
}

AbelianConnectionSample connection_increment(const UniformCoordinates& a,
                                             const UniformCoordinates& b) {
  if (a.level >= 0 && b.level >= 0 && a.level != b.level) {
    fail(ErrorCode::LevelMismatch, "samples belong to different levels");
  }
  if (a.anchor != b.anchor || a.xi.size() != b.xi.size()) {
    fail(ErrorCode::InvalidArgument, "samples use different charts");
  }
  const Vector mid = 0.5 * (a.xi + b.xi);
  const Vector d = b.xi - a.xi;
  // Eigen's dot conjugates its first argument.
  const Complex form = 0.5 * kI * (mid.dot(d) - d.dot(mid));
  const double norm = 1.0 + mid.squaredNorm();
  return {form.real() / norm, std::abs(form.imag()) / norm};
}

AbelianHolonomy AbelianHolonomy::from_total(double gamma) {
  AbelianHolonomy h;
  h.gamma = gamma;
  h.principal = wrap_phase(gamma);
  h.winding = static_cast<int>(std::lround((gamma - h.principal) / kTwoPi));
  return h;
}

BerryResult berry_phase(const ParametricHamiltonian& model,
                        const ParameterLoop& loop, int level,
                        const BerryOptions& options) {
  if (level < 0 || level >= model.dim) {
    fail(ErrorCode::InvalidArgument, "level index out of range");
  }
  struct State {
    HermitianMatrix h;
    RealVector values;
    double energy = 0.0;
  };
  BerryResult result;
  result.min_gap = std::numeric_limits<double>::infinity();

  auto solve = [&](int k, double previous, bool first) {
    State s;
    s.h = model(loop.sample(k));
    s.values = eigh(s.h.matrix()).values;
    Eigen::Index idx = level;
    if (!first) {
      (s.values.array() - previous).abs().minCoeff(&idx);
    }
    s.energy = s.values(idx);
    for (Eigen::Index j = 0; j < s.values.size(); ++j) {
      if (j == idx) continue;
      const double gap = std::abs(s.values(j) - s.energy);
      result.min_gap = std::min(result.min_gap, gap);
      if (gap < options.gap_tol) {
        fail(ErrorCode::LevelCrossing,
             "level gap " + std::to_string(gap) + " below gap_tol at sample " +
                 std::to_string(k));
      }
    }
    return s;
  };

  const State start = solve(0, 0.0, true);
  const double e0 = start.energy;
  auto energy_of = [&](const State& s) {
    const double drift = std::abs(s.energy - e0);
    result.max_energy_drift = std::max(result.max_energy_drift, drift);
    if (options.energy == EnergyPolicy::Constant) {
      if (drift > options.drift_tol) {
        fail(ErrorCode::LevelDrift,
             "eigenvalue drifts by " + std::to_string(drift) +
                 " along the loop; use the instantaneous energy policy");
      }
      return e0;
    }
    return s.energy;
  };
  auto tol_of = [&](const State& s) {
    return cond_tol_for(s.values, options.cond_tol_scale, s.h.dim());
  };

  int anchor = 0;
  if (options.pivot == PivotPolicy::Fixed) {
    anchor = options.fixed_anchor < 0 ? model.dim - 1 : options.fixed_anchor;
  } else {
    anchor = ranked_anchors(start.h.matrix(), e0).front();
  }
  result.start_anchor = anchor;

  UniformCoordinates current =
      uniform_coordinates(start.h, e0, anchor, level, tol_of(start));
  State previous = start;
  double total = 0.0;
  const int n = loop.steps();
  if (options.record_trace) result.trace.reserve(n);

  for (int k = 0; k < n; ++k) {
    const State next = (k + 1 < n) ? solve(k + 1, previous.energy, false) : start;
    const double e_next = energy_of(next);
    const double tol = tol_of(next);
    if (minor_determinant(next.h.matrix(), e_next, anchor) < tol) {
      if (options.pivot == PivotPolicy::Fixed) {
        fail(ErrorCode::PivotSingular,
             "fixed anchor turns singular at sample " + std::to_string(k + 1));
      }
      const int fresh = ranked_anchors(next.h.matrix(), e_next).front();
      const UniformCoordinates moved = uniform_coordinates(
          previous.h, current.energy, fresh, level, tol_of(previous));
      total -= std::arg(current.eigenvector().dot(moved.eigenvector()));
      current = moved;
      anchor = fresh;
      ++result.pivot_changes;
    }
    const UniformCoordinates upcoming =
        uniform_coordinates(next.h, e_next, anchor, level, tol);
    const AbelianConnectionSample inc = connection_increment(current, upcoming);
    total += inc.value;
    result.max_imag_residue = std::max(result.max_imag_residue, inc.imag_residue);
    if (options.record_trace) {
      result.trace.push_back({k, loop.time(k), loop.sample(k), inc.value, total});
    }
    current = upcoming;
    previous = next;
  }
  if (anchor != result.start_anchor) {
    const UniformCoordinates home = uniform_coordinates(
        start.h, e0, result.start_anchor, level, tol_of(start));
    total -= std::arg(current.eigenvector().dot(home.eigenvector()));
  }
  result.holonomy = AbelianHolonomy::from_total(total);
  return result;
}

double solid_angle(const ParameterLoop& field_loop, double pole_tol) {
  const Eigen::Vector3d north(0.0, 0.0, 1.0);
  auto direction = [&](int k) {
    const ParameterPoint r = field_loop.sample(k);
    if (r.size() != 3) {
      fail(ErrorCode::InvalidArgument, "solid angle needs a 3-vector loop");
    }
    const double len = r.norm();
    if (!(len > 0.0)) fail(ErrorCode::InvalidArgument, "field vanishes on the loop");
    const Eigen::Vector3d n = r / len;
    if ((n + north).norm() < pole_tol) {
      fail(ErrorCode::PoleCrossing,
           "loop passes through the projection pole at sample " +
               std::to_string(k));
    }
    return n;
  };
  double omega = 0.0;
  Eigen::Vector3d a = direction(0);
  const Eigen::Vector3d first = a;
  for (int k = 0; k < field_loop.steps(); ++k) {
    const Eigen::Vector3d b = (k + 1 < field_loop.steps()) ? direction(k + 1) : first;
    const double num = north.dot(a.cross(b));
    const double den = 1.0 + north.dot(a) + a.dot(b) + b.dot(north);
    omega += 2.0 * std::atan2(num, den);
    a = b;
  }
  return omega;
}

AbelianHolonomy two_level_closed_form(const ParameterLoop& field_loop, int sign,
                                      double pole_tol) {
  if (sign != 1 && sign != -1) {
    fail(ErrorCode::InvalidArgument, "sign must be +1 or -1");
  }
  return AbelianHolonomy::from_total(-0.5 * sign * solid_angle(field_loop, pole_tol));
}

// ---- three-level closed form ----------------------------------------------

Eigen::Vector3d three_level_energies(const Matrix& h) {
  if (h.rows() != 3 || h.cols() != 3) {
    fail(ErrorCode::InvalidArgument, "expected a 3x3 matrix");
  }
  const double q = h.trace().real() / 3.0;
  Matrix b = h;
  b.diagonal().array() -= q;
  const double p2 = b.squaredNorm() / 6.0;
  if (p2 <= 0.0) return Eigen::Vector3d::Constant(q);
  const double p = std::sqrt(p2);
  b /= p;
  const Complex det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(0.5 * det.real(), -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + kTwoPi / 3.0);
  return {lo, 3.0 * q - hi - lo, hi};
}

ThreeLevelCoefficients three_level_coefficients(const ThreeLevelTemplate& tmpl,
                                                int level, double phase12) {
  if (level < 0 || level > 2) {
    fail(ErrorCode::InvalidArgument, "three-level index must be 0, 1 or 2");
  }
  const Matrix h = tmpl.matrix(phase12);
  const Eigen::Vector3d energies = three_level_energies(h);
  const double e = energies(level);
  for (int j = 0; j < 3; ++j) {
    if (j != level && std::abs(energies(j) - e) < 1e-10 * (1.0 + std::abs(e))) {
      fail(ErrorCode::LevelCrossing, "three-level spectrum is degenerate");
    }
  }
  const Complex h12 = h(0, 1), h13 = h(0, 2), h23 = h(1, 2);
  const double a1 = tmpl.h11 - e, a2 = tmpl.h22 - e, a3 = tmpl.h33 - e;
  const double n12 = std::norm(h12), n13 = std::norm(h13), n23 = std::norm(h23);

  // dE/dphi from the characteristic polynomial p(E, phi) = det(H - E).
  const double triple = (h12 * h23 * std::conj(h13)).imag();
  const double dp_dphi = -2.0 * triple;
  const double dp_de = -(a2 * a3 + a1 * a3 + a1 * a2) + n12 + n13 + n23;

  ThreeLevelCoefficients c;
  c.energy = e;
  c.denergy = -dp_dphi / dp_de;
  c.delta0 = a1 * a2 - n12;
  c.delta1 = h12 * h23 - h13 * a2;
  c.delta2 = std::conj(h12) * h13 - h23 * a1;
  const Complex d1 = kI * h12 * h23 + c.denergy * h13;
  const Complex d2 = -kI * std::conj(h12) * h13 + c.denergy * h23;
  const double den = c.delta0 * c.delta0 + std::norm(c.delta1) + std::norm(c.delta2);
  c.density = -(std::conj(c.delta1) * d1 + std::conj(c.delta2) * d2).imag() / den;
  c.c = std::abs(h12) * std::abs(h13) * std::abs(h23) / den;
  c.a = (n13 > 0.0 && n23 > 0.0) ? 1.0 / n13 - 1.0 / n23 : 0.0;
  c.d = tmpl.h11 + tmpl.h22 - 2.0 * e;
  return c;
}

ThreeLevelResult three_level_closed_form(const ThreeLevelTemplate& tmpl,
                                         int level, double start, int winding,
                                         int nodes, double delta0_tol) {
  if (nodes < 8) fail(ErrorCode::InvalidArgument, "need at least 8 nodes");
  ThreeLevelResult out;
  out.at_start = three_level_coefficients(tmpl, level, start);
  out.min_abs_delta0 = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  double last_sign = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double phi = start + kTwoPi * j / nodes;
    const ThreeLevelCoefficients c = three_level_coefficients(tmpl, level, phi);
    const double scale = std::max(1.0, c.energy * c.energy);
    out.min_abs_delta0 = std::min(out.min_abs_delta0, std::abs(c.delta0));
    const double sign = c.delta0 > 0.0 ? 1.0 : -1.0;
    if (std::abs(c.delta0) < delta0_tol * scale || (j > 0 && sign != last_sign)) {
      fail(ErrorCode::DegenerateMinor,
           "Delta0 vanishes on the loop near phi12 = " + std::to_string(phi));
    }
    last_sign = sign;
    sum += c.density;
  }
  out.holonomy = AbelianHolonomy::from_total(winding * kTwoPi * sum / nodes);
  return out;
}

// ---- three-element algebras -----------------------------------------------

AbelianHolonomy algebra_phase(const AlgebraFormPath& path) {
  const std::size_t n = path.xi.size();
  if (n < 3) fail(ErrorCode::InvalidArgument, "path needs at least 3 samples");
  if (path.algebra == Algebra::su11) {
    for (const Complex& z : path.xi) {
      if (std::abs(z) >= 1.0) {
        fail(ErrorCode::DomainViolation, "su(1,1) path leaves the unit disk");
      }
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = path.xi[k];
    const Complex b = path.xi[(k + 1) % n];
    const Complex mid = 0.5 * (a + b);
    const Complex d = b - a;
    const Complex omega = mid * std::conj(d) - std::conj(mid) * d;
    double den = 1.0;
    if (path.algebra == Algebra::su2) den = 1.0 + std::norm(mid);
    if (path.algebra == Algebra::su11) den = 1.0 - std::norm(mid);
    total += path.m * (-kI * omega).real() / den;
  }
  return AbelianHolonomy::from_total(total);
}

// ---- curvature oracle -----------------------------------------------------

RealMatrix curvature_oracle(const ParametricHamiltonian& model,
                            const ParameterPoint& r, int level, double fd_step,
                            double gap_tol) {
  if (r.size() != model.parameter_dim) {
    fail(ErrorCode::InvalidArgument, "parameter point has the wrong dimension");
  }
  if (level < 0 || level >= model.dim) {
    fail(ErrorCode::InvalidArgument, "level index out of range");
  }
  const Spectrum s = eigh(model(r).matrix());
  const Eigen::Index dim = s.values.size();
  for (Eigen::Index m = 0; m < dim; ++m) {
    if (m != level && std::abs(s.values(m) - s.values(level)) < gap_tol) {
      fail(ErrorCode::DegenerateSpectrum, "level is degenerate at R");
    }
  }
  const Eigen::Index p = r.size();
  const double h = fd_step * std::max(1.0, r.norm());
  std::vector<Matrix> grad(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    ParameterPoint up = r, down = r;
    up(i) += h;
    down(i) -= h;
    const Matrix d = (model(up).matrix() - model(down).matrix()) / (2.0 * h);
    grad[i] = s.vectors.adjoint() * d * s.vectors;
  }
  RealMatrix f = RealMatrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index m = 0; m < dim; ++m) {
        if (m == level) continue;
        const double gap = s.values(m) - s.values(level);
        acc += grad[i](level, m) * grad[j](m, level) / (gap * gap);
      }
      f(i, j) = -2.0 * acc.imag();
      f(j, i) = -f(i, j);
    }
  }
  return f;
}

Eigen::Vector3d curvature_vector(const RealMatrix& f) {
  if (f.rows() != 3 || f.cols() != 3) {
    fail(ErrorCode::InvalidArgument, "curvature vector needs a 3x3 form");
  }
  return {f(1, 2), f(2, 0), f(0, 1)};
}

}  // namespace holonomy
