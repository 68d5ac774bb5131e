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

#include "holonomy/propagator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "holonomy/errors.hpp"

namespace holonomy {

namespace {

double loop_max_norm(const ParametricHamiltonian& model, const ParameterLoop& loop) {
  double worst = 0.0;
  for (int k = 0; k < loop.steps(); ++k) {
    worst = std::max(worst, eigh(model(loop.sample(k)).matrix()).values.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

PropagationResult propagate(const ParametricHamiltonian& model,
                            const ParameterLoop& loop, double duration,
                            int steps, const PropagateOptions& options) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    fail(ErrorCode::InvalidArgument, "duration must be positive");
  }
  if (steps < 1) fail(ErrorCode::InvalidArgument, "steps must be positive");
  const double dt = duration / steps;
  const double scale = loop.period() / duration;
  auto hamiltonian = [&](double t) { return model(loop.at(t * scale)).matrix(); };

  PropagationResult out;
  out.duration = duration;
  out.steps = steps;
  out.energies.resize(steps + 1, model.dim);
  Matrix u = Matrix::Identity(model.dim, model.dim);
  out.energies.row(0) = eigh(hamiltonian(0.0)).values.transpose();
  if (options.record_every > 0) {
    out.sample_times.push_back(0.0);
    out.samples.push_back(u);
  }
  for (int k = 0; k < steps; ++k) {
    const Spectrum s = eigh(hamiltonian((k + 0.5) * dt));
    const double step_norm = s.values.cwiseAbs().maxCoeff() * dt;
    out.max_step_norm = std::max(out.max_step_norm, step_norm);
    if (step_norm > options.max_step_norm) {
      fail(ErrorCode::StepTooCoarse,
           "||H|| dt = " + std::to_string(step_norm) + " exceeds " +
               std::to_string(options.max_step_norm));
    }
    Vector phases(s.values.size());
    for (Eigen::Index j = 0; j < phases.size(); ++j) {
      phases(j) = std::polar(1.0, -dt * s.values(j));
    }
    u = s.vectors * phases.asDiagonal() * (s.vectors.adjoint() * u);
    out.energies.row(k + 1) = eigh(hamiltonian((k + 1) * dt)).values.transpose();
    if (options.record_every > 0 && (k + 1) % options.record_every == 0) {
      out.sample_times.push_back((k + 1) * dt);
      out.samples.push_back(u);
    }
  }
  out.u = u;
  out.unitarity_error = unitarity_error(u);
  return out;
}

PhaseExtraction extract_geometric_phase(const PropagationResult& result,
                                        const ParametricHamiltonian& model,
                                        const ParameterLoop& loop, int level,
                                        double leak_tol) {
  if (level < 0 || level >= model.dim) {
    fail(ErrorCode::InvalidArgument, "level index out of range");
  }
  const RealMatrix& e = result.energies;
  for (Eigen::Index k = 0; k < e.rows(); ++k) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) {
      if (j != level && std::abs(e(k, j) - e(k, level)) < 1e-10) {
        fail(ErrorCode::LevelCrossing, "level is degenerate along the run");
      }
    }
  }
  const Spectrum start = eigh(model(loop.sample(0)).matrix());
  const Vector n0 = start.vectors.col(level);
  // The loop is closed, so |n(R(T))> is the same vector as |n(R(0))>.
  const Complex amplitude = n0.dot(result.u * n0);

  PhaseExtraction p;
  p.level = level;
  p.total = std::arg(amplitude);
  const double dt = result.duration / result.steps;
  double integral = 0.0;
  for (Eigen::Index k = 0; k + 1 < e.rows(); ++k) {
    integral += 0.5 * (e(k, level) + e(k + 1, level)) * dt;
  }
  p.dynamic = integral;
  p.gamma = wrap_phase(p.total + p.dynamic);
  p.leakage = std::max(0.0, 1.0 - std::norm(amplitude));
  if (p.leakage > leak_tol) {
    fail(ErrorCode::LeakageExceeded,
         "leakage " + std::to_string(p.leakage) + " exceeds leak_tol " +
             std::to_string(leak_tol));
  }
  return p;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] <= 0.0 || y[i] == 0.0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

SweepTable adiabatic_sweep(const ParametricHamiltonian& model,
                           const ParameterLoop& loop, int level,
                           const std::vector<double>& durations,
                           double reference, const SweepOptions& options) {
  if (durations.empty()) fail(ErrorCode::InvalidArgument, "no durations given");
  if (!std::is_sorted(durations.begin(), durations.end())) {
    fail(ErrorCode::InvalidArgument, "durations must be ascending");
  }
  const double norm = loop_max_norm(model, loop);
  SweepTable table;
  table.reference = reference;
  table.rows.resize(durations.size());

  auto run_one = [&](std::size_t i) {
    const double duration = durations[i];
    const double wanted = std::ceil(norm * duration / options.step_norm);
    const int steps = static_cast<int>(std::clamp(
        wanted, static_cast<double>(options.min_steps),
        static_cast<double>(options.max_steps)));
    PropagateOptions popts;
    popts.max_step_norm = std::max(0.1, options.step_norm);
    const PropagationResult r = propagate(model, loop, duration, steps, popts);
    const PhaseExtraction p = extract_geometric_phase(r, model, loop, level, 1.0);
    SweepRow& row = table.rows[i];
    row.duration = duration;
    row.steps = steps;
    row.gamma = p.gamma;
    row.leakage = p.leakage;
    row.error = phase_distance(p.gamma, reference);
  };

  const int threads = std::max(1, std::min<int>(options.threads, durations.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < durations.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex guard;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < durations.size(); i = next++) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<double> ts, errs, leaks;
  for (const SweepRow& row : table.rows) {
    ts.push_back(row.duration);
    errs.push_back(row.error);
    leaks.push_back(row.leakage);
  }
  table.error_exponent = log_log_slope(ts, errs);
  table.leakage_exponent = log_log_slope(ts, leaks);
  return table;
}

}  // namespace holonomy
