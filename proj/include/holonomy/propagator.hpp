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

// Brute-force Schroedinger integration used as the reference for the
// analytic modules. The loop is traversed once in time T, i.e. the
// Hamiltonian at time t is H(R(t * period / T)).

struct PropagateOptions {
  double max_step_norm = 0.1;  ///< bound on ||H|| dt
  int record_every = 0;        ///< keep U at every k-th grid point; 0 disables
};

struct PropagationResult {
  Matrix u;                    ///< U(T)
  double duration = 0.0;
  int steps = 0;
  double unitarity_error = 0.0;
  double max_step_norm = 0.0;  ///< max ||H(t_mid)|| dt actually used
  RealMatrix energies;         ///< (steps + 1) x n ascending eigenvalues on the grid
  std::vector<double> sample_times;
  std::vector<Matrix> samples;
};

/// U(T) as the ordered product of exp(-i H(t_k + dt/2) dt).
PropagationResult propagate(const ParametricHamiltonian& model,
                            const ParameterLoop& loop, double duration,
                            int steps, const PropagateOptions& options = {});

struct PhaseExtraction {
  int level = 0;
  double total = 0.0;    ///< arg <n(R(T))|U(T)|n(R(0))>
  double dynamic = 0.0;  ///< integral of E_n over [0, T]
  double gamma = 0.0;    ///< total + dynamic, in (-pi, pi]
  double leakage = 0.0;  ///< 1 - |<n|U|n>|^2
};

PhaseExtraction extract_geometric_phase(const PropagationResult& result,
                                        const ParametricHamiltonian& model,
                                        const ParameterLoop& loop, int level,
                                        double leak_tol = 1e-2);

struct SweepRow {
  double duration = 0.0;
  int steps = 0;
  double gamma = 0.0;
  double leakage = 0.0;
  double error = 0.0;  ///< |gamma - reference| modulo 2 pi
};

struct SweepTable {
  std::vector<SweepRow> rows;
  double reference = 0.0;
  double error_exponent = 0.0;    ///< slope of log error against log T
  double leakage_exponent = 0.0;  ///< slope of log leakage against log T
};

struct SweepOptions {
  double step_norm = 0.02;  ///< target ||H|| dt when choosing the step count
  int min_steps = 1000;
  int max_steps = 1000000;
  int threads = 1;
};

/// Propagates once per duration (ascending) and compares the extracted phase
/// with `reference`.
SweepTable adiabatic_sweep(const ParametricHamiltonian& model,
                           const ParameterLoop& loop, int level,
                           const std::vector<double>& durations,
                           double reference, const SweepOptions& options = {});

/// Least-squares slope of log|y| against log x over the entries with y != 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace holonomy
