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

#include "holonomy/job.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <set>

#include "holonomy/abelian.hpp"
#include "holonomy/errors.hpp"
#include "holonomy/nonabelian.hpp"
#include "holonomy/propagator.hpp"
#include "holonomy/quadrupole.hpp"

namespace holonomy {

using io::Json;

namespace {

const std::vector<std::string> kMethods = {"abelian",    "nonabelian", "nonadiabatic",
                                           "quadrupole", "propagate",  "sweep"};

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  fail(ErrorCode::ConfigInvalid, "field '" + field + "': " + why);
}

const ModelSchema* find_schema(const std::vector<ModelSchema>& list,
                               const std::string& name) {
  for (const ModelSchema& s : list) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

// Fills defaults and checks that every key is known and numeric.
Json resolve_params(const Json& given, const ModelSchema& schema,
                    const std::string& field) {
  if (!given.is_object()) bad(field, "expected an object");
  Json out = Json::object();
  for (const ParameterSchema& p : schema.parameters) out[p.name] = p.default_value;
  for (auto it = given.begin(); it != given.end(); ++it) {
    const bool known = std::any_of(
        schema.parameters.begin(), schema.parameters.end(),
        [&](const ParameterSchema& p) { return p.name == it.key(); });
    if (!known) bad(field + "." + it.key(), "unknown parameter");
    if (!it.value().is_number()) bad(field + "." + it.key(), "expected a number");
    if (!std::isfinite(it.value().get<double>())) {
      bad(field + "." + it.key(), "must be finite");
    }
    out[it.key()] = it.value();
  }
  return out;
}

double num(const Json& params, const std::string& key) {
  return params.at(key).get<double>();
}

int integer(const Json& params, const std::string& key, const std::string& field) {
  const double v = num(params, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) bad(field + "." + key, "expected an integer");
  return static_cast<int>(v);
}

double option_number(const Json& options, const std::string& key, double fallback) {
  if (!options.contains(key)) return fallback;
  const Json& v = options.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) {
    bad("options." + key, "expected a finite number");
  }
  return v.get<double>();
}

std::string option_string(const Json& options, const std::string& key,
                          const std::string& fallback,
                          const std::vector<std::string>& allowed) {
  if (!options.contains(key)) return fallback;
  const Json& v = options.at(key);
  if (!v.is_string()) bad("options." + key, "expected a string");
  const std::string s = v.get<std::string>();
  if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
    bad("options." + key, "unsupported value '" + s + "'");
  }
  return s;
}

SpinRegisterSpec register_spec(const Json& p) {
  SpinRegisterSpec s;
  s.omega01 = num(p, "omega01");
  s.omega02 = num(p, "omega02");
  s.J = num(p, "J");
  s.omega1 = num(p, "omega1");
  s.omega_r = num(p, "omega_r");
  return s;
}

QuadrupoleSpec quadrupole_spec(const Json& p) {
  QuadrupoleSpec s;
  s.omega0 = num(p, "omega0");
  s.omega1 = num(p, "omega1");
  s.theta = num(p, "theta");
  return s;
}

ThreeLevelTemplate three_level_spec(const Json& p) {
  ThreeLevelTemplate t;
  t.h11 = num(p, "h11");
  t.h22 = num(p, "h22");
  t.h33 = num(p, "h33");
  t.abs12 = num(p, "abs12");
  t.abs13 = num(p, "abs13");
  t.abs23 = num(p, "abs23");
  t.phase13 = num(p, "phase13");
  t.phase23 = num(p, "phase23");
  return t;
}

ParametricHamiltonian build_model(const JobConfig& c) {
  if (c.model == "spin_half") return spin_half_model();
  if (c.model == "two_spin") return two_spin_hamiltonian(register_spec(c.model_params));
  if (c.model == "quadrupole") return quadrupole_model(quadrupole_spec(c.model_params));
  if (c.model == "three_level") return three_level_model(three_level_spec(c.model_params));
  fail(ErrorCode::ModelUnknown, "unknown model '" + c.model + "'");
}

ParameterLoop build_loop(const JobConfig& c) {
  const Json& p = c.loop_params;
  const int steps = integer(p, "steps", "loop.params");
  if (c.loop == "latitude") {
    return latitude_loop(num(p, "theta"), num(p, "omega_r"), steps, num(p, "magnitude"));
  }
  if (c.loop == "circular_drive") {
    return circular_drive_loop(num(p, "omega_parallel"), num(p, "omega_perp"),
                               num(p, "omega_r"), steps, num(p, "phase0"));
  }
  if (c.loop == "rotation") {
    double omega = num(p, "omega");
    if (omega == 0.0 && c.model == "quadrupole") omega = num(c.model_params, "omega1");
    return rotation_loop(omega, steps);
  }
  if (c.loop == "phase") {
    return phase_loop(num(p, "start"), integer(p, "winding", "loop.params"), steps);
  }
  if (c.loop == "two_spin") return two_spin_loop(register_spec(c.model_params), steps);
  bad("loop.generator", "unknown generator '" + c.loop + "'");
}

Json phase_json(double gamma, const std::string& convention) {
  const AbelianHolonomy h = AbelianHolonomy::from_total(gamma);
  return {{"value", h.gamma},
          {"principal", h.principal},
          {"winding", h.winding},
          {"convention", convention}};
}

std::string convention_name(PhaseConvention c) {
  return c == PhaseConvention::Pole ? "pole" : "equator";
}

// ---- methods ---------------------------------------------------------------

void run_abelian(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  const ParametricHamiltonian model = build_model(c);
  const ParameterLoop loop = build_loop(c);
  BerryOptions opts;
  opts.gap_tol = c.tolerances.gap_tol;
  opts.cond_tol_scale = c.tolerances.cond_tol;
  opts.record_trace = s.trace;
  opts.energy = option_string(c.options, "energy_policy", "constant",
                              {"constant", "instantaneous"}) == "instantaneous"
                    ? EnergyPolicy::Instantaneous
                    : EnergyPolicy::Constant;
  if (c.options.contains("anchor")) {
    opts.pivot = PivotPolicy::Fixed;
    opts.fixed_anchor = static_cast<int>(option_number(c.options, "anchor", -1));
  }
  const BerryResult r = berry_phase(model, loop, c.level, opts);
  Json& res = out.result["result"];
  res["gamma"] = phase_json(r.holonomy.gamma, "berry");
  res["level"] = c.level;
  res["start_anchor"] = r.start_anchor;
  res["pivot_changes"] = r.pivot_changes;
  if (c.model == "spin_half" && model.dim == 2) {
    const int sign = c.level == 1 ? 1 : -1;
    res["closed_form"] = phase_json(two_level_closed_form(loop, sign).gamma, "berry");
  }
  if (c.model == "three_level" && c.loop == "phase") {
    const ThreeLevelResult t = three_level_closed_form(
        three_level_spec(c.model_params), c.level, num(c.loop_params, "start"),
        integer(c.loop_params, "winding", "loop.params"));
    res["closed_form"] = phase_json(t.holonomy.gamma, "berry");
  }
  out.result["diagnostics"] = {{"max_imag_residue", r.max_imag_residue},
                               {"max_energy_drift", r.max_energy_drift},
                               {"min_gap", r.min_gap}};
  if (s.trace) {
    out.trace_header = {"step", "t"};
    for (int i = 0; i < model.parameter_dim; ++i) {
      out.trace_header.push_back("r" + std::to_string(i));
    }
    out.trace_header.push_back("increment");
    out.trace_header.push_back("cumulative");
    for (const ConnectionTraceRow& row : r.trace) {
      std::vector<double> v = {static_cast<double>(row.step), row.t};
      for (Eigen::Index i = 0; i < row.r.size(); ++i) v.push_back(row.r(i));
      v.push_back(row.increment);
      v.push_back(row.cumulative);
      out.trace_rows.push_back(std::move(v));
    }
  }
}

void run_nonabelian(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  const ParametricHamiltonian model = build_model(c);
  const ParameterLoop loop = build_loop(c);
  HolonomyOptions opts;
  opts.gap_tol = c.tolerances.gap_tol;
  opts.cond_tol_scale = c.tolerances.cond_tol;
  opts.keep_connections = s.trace;
  opts.form = option_string(c.options, "form", "closed", {"closed", "numeric"}) == "numeric"
                  ? ConnectionForm::Numeric
                  : ConnectionForm::ClosedForm;
  const NonAbelianHolonomy h = holonomy(model, loop, c.level, opts);
  Json& res = out.result["result"];
  res["u"] = io::unitary_to_json(h.u, 1e-10);
  res["eigenphases"] = io::real_vector_to_json(h.eigenphases);
  res["trace"] = io::complex_to_json(h.u.trace());
  res["multiplicity"] = h.multiplicity;
  res["pivot_changes"] = h.pivot_changes;
  res["start_anchors"] = h.start_anchors;
  out.result["diagnostics"] = {{"unitarity_error", h.unitarity_error},
                               {"max_skew_residue", h.max_skew_residue},
                               {"min_overlap", h.min_overlap}};
  if (s.trace) {
    out.trace_header = {"step", "t", "max_abs_increment", "trace_increment"};
    for (std::size_t k = 0; k < h.connections.size(); ++k) {
      const Matrix& a = h.connections[k];
      out.trace_rows.push_back({static_cast<double>(k), loop.time(static_cast<int>(k)),
                                max_abs(a), a.trace().real()});
    }
  }
}

void run_nonadiabatic(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  Json& res = out.result["result"];
  const std::string conv = convention_name(s.convention);
  if (c.model == "two_spin") {
    const SpinRegisterSpec spec = register_spec(c.model_params);
    const int pol = static_cast<int>(option_number(c.options, "polarization", 1));
    if (pol != 1 && pol != -1) bad("options.polarization", "must be +1 or -1");
    const TwoQubitGate g = two_qubit_geometric_gate(spec, pol);
    // Pole-referenced phases differ by pi s per spin, a global sign of the gate.
    const double shift = s.convention == PhaseConvention::Pole ? kPi * pol : 0.0;
    res["gate"] = io::unitary_to_json(g.u, 1e-12);
    res["gamma1"] = phase_json(g.gamma1 + shift, conv);
    res["gamma2"] = phase_json(g.gamma2 + shift, conv);
    res["theta1"] = g.theta1;
    res["theta2"] = g.theta2;
    res["theta1_star"] = g.theta1_star;
    res["theta2_star"] = g.theta2_star;
    res["polarization"] = pol;
    return;
  }
  if (c.model != "spin_half" || c.loop != "circular_drive") {
    bad("method", "nonadiabatic needs two_spin, or spin_half with a circular_drive loop");
  }
  const Json& p = c.loop_params;
  const double w_par = num(p, "omega_parallel");
  const double w_perp = num(p, "omega_perp");
  const double w_r = num(p, "omega_r");
  const double phase0 = num(p, "phase0");
  const double omega = std::hypot(w_par, w_perp);
  const double theta = std::atan2(w_perp, w_par);
  const int pol = polarization_of(w_r);
  const EffectiveAngle e = effective_angle(theta, w_r, omega, pol);
  const double period = kTwoPi / std::abs(w_r);
  const Eigen::Vector2d n(std::cos(phase0), std::sin(phase0));
  const Matrix2 u = rabi_evolution(w_par, w_perp, w_r, n, period);

  // Eigenstates of the rotating-frame field at t = 0.
  const Eigen::Vector3d field(w_perp * n(0), w_perp * n(1), w_par - w_r);
  const Spectrum rot = eigh(spin_half_hamiltonian(field).matrix());
  double factor_error = 0.0;
  Json phases = Json::object();
  for (int idx = 0; idx < 2; ++idx) {
    const double m = idx == 1 ? 0.5 : -0.5;
    const PhasePair pp = cycle_phases(m, theta, e.theta_star, omega, w_r);
    const Vector v = rot.vectors.col(idx);
    const Complex expected = std::polar(1.0, -pp.phi_d + pp.gamma_pole);
    factor_error = std::max(factor_error, (u * v - expected * v).cwiseAbs().maxCoeff());
    phases[idx == 1 ? "m_plus" : "m_minus"] = {
        {"m", m},
        {"phi_d", pp.phi_d},
        {"gamma", phase_json(pp.gamma(s.convention), conv)},
        {"delta_phi_g", pp.delta_phi_g}};
  }
  res["theta"] = theta;
  res["theta_star"] = e.theta_star;
  res["r"] = e.r;
  res["polarization"] = pol;
  res["phases"] = phases;
  res["u_cycle"] = io::unitary_to_json(u, 1e-12);
  out.result["diagnostics"] = {{"factorization_error", factor_error}};
  if (s.trace) {
    out.trace_header = {"t", "abs_zeta", "arg_zeta", "phi"};
    const int steps = integer(p, "steps", "loop.params");
    for (int k = 0; k <= steps; ++k) {
      const double t = period * k / steps;
      const RotatingFrameSolution sol = rotating_frame_solution(w_par, w_perp, w_r, n, t);
      out.trace_rows.push_back({t, std::abs(sol.zeta), std::arg(sol.zeta), sol.phi});
    }
  }
}

void run_quadrupole(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  if (c.model != "quadrupole") bad("method", "quadrupole method needs the quadrupole model");
  const QuadrupoleSpec spec = quadrupole_spec(c.model_params);
  spec.validate();
  const double default_t = spec.omega1 != 0.0 ? 0.5 * kPi / std::abs(spec.omega1) : 1.0;
  const double t = option_number(c.options, "t", default_t);
  const BlockDiagonalization bd = block_diagonalize(spec);
  const QuadrupoleConnection conn = connection(spec);
  const QuadrupoleGate g = two_qubit_gate(spec, t);
  Json& res = out.result["result"];
  res["t"] = t;
  res["gate"] = io::unitary_to_json(g.u, 1e-10);
  res["connection"] = io::matrix_to_json(conn.a);
  res["energies"] = io::real_vector_to_json(bd.energies);
  res["dynamic_phases"] = io::real_vector_to_json(g.dynamic_phases);
  const Spin32Frame& f = bd.frame;
  auto pair = [](const Eigen::Vector2d& v) { return Json::array({v(0), v(1)}); };
  res["frame"] = {{"alpha", f.alpha},         {"xi", f.xi},
                  {"lambda1", pair(f.lambda1)}, {"lambda2", pair(f.lambda2)},
                  {"k", pair(f.k)},             {"mu", pair(f.mu)},
                  {"beta1_sq", pair(f.beta1_sq)}, {"beta2_sq", pair(f.beta2_sq)},
                  {"trivial", f.trivial}};
  out.result["diagnostics"] = {{"two_step_residual", bd.two_step_residual},
                               {"residual", bd.residual},
                               {"unitarity_residual", f.unitarity_residual},
                               {"diagonalization_residual", f.diagonalization_residual},
                               {"hermiticity_error", conn.hermiticity_error},
                               {"time_drift", conn.time_drift},
                               {"closed_form_mismatch", conn.closed_form_mismatch},
                               {"mirrored_mismatch", conn.mirrored_mismatch}};
  if (s.trace) {
    out.trace_header = {"t", "p0", "p1", "p2", "p3"};
    const int steps = 200;
    Vector psi0 = Vector::Zero(4);
    psi0(0) = 1.0;
    for (int k = 0; k <= steps; ++k) {
      const double tk = t * k / steps;
      const Vector psi = evolve(spec, psi0, tk);
      out.trace_rows.push_back({tk, std::norm(psi(0)), std::norm(psi(1)),
                                std::norm(psi(2)), std::norm(psi(3))});
    }
  }
}

int auto_steps(const ParametricHamiltonian& model, const ParameterLoop& loop,
               double duration) {
  double norm = 0.0;
  for (int k = 0; k < loop.steps(); ++k) {
    norm = std::max(norm, eigh(model(loop.sample(k)).matrix()).values.cwiseAbs().maxCoeff());
  }
  return std::max(1000, static_cast<int>(std::ceil(norm * duration / 0.02)));
}

bool non_degenerate(const ParametricHamiltonian& model) {
  return std::all_of(model.degeneracies.begin(), model.degeneracies.end(),
                     [](const LevelMultiplicity& l) { return l.multiplicity == 1; });
}

void run_propagate(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  const ParametricHamiltonian model = build_model(c);
  const ParameterLoop loop = build_loop(c);
  const double duration = option_number(c.options, "duration", loop.period());
  if (!(duration > 0.0)) bad("options.duration", "must be positive");
  const int steps = c.options.contains("steps")
                        ? static_cast<int>(option_number(c.options, "steps", 0))
                        : auto_steps(model, loop, duration);
  PropagateOptions popts;
  if (s.trace) popts.record_every = std::max(1, steps / 1000);
  const PropagationResult r = propagate(model, loop, duration, steps, popts);
  Json& res = out.result["result"];
  res["u"] = io::unitary_to_json(r.u, 1e-9);
  res["duration"] = duration;
  res["steps"] = steps;
  if (non_degenerate(model)) {
    const PhaseExtraction p =
        extract_geometric_phase(r, model, loop, c.level, c.tolerances.leak_tol);
    res["extraction"] = {{"level", p.level},
                         {"total", p.total},
                         {"dynamic", p.dynamic},
                         {"gamma", phase_json(p.gamma, "berry")},
                         {"leakage", p.leakage}};
  }
  out.result["diagnostics"] = {{"unitarity_error", r.unitarity_error},
                               {"max_step_norm", r.max_step_norm}};
  if (s.trace) {
    out.trace_header = {"t"};
    for (int j = 0; j < model.dim; ++j) out.trace_header.push_back("E" + std::to_string(j));
    const int stride = popts.record_every;
    for (int k = 0; k <= steps; k += stride) {
      std::vector<double> row = {duration * k / steps};
      for (int j = 0; j < model.dim; ++j) row.push_back(r.energies(k, j));
      out.trace_rows.push_back(std::move(row));
    }
  }
}

void run_sweep(const JobConfig& c, const RunSettings& s, JobOutput& out) {
  const ParametricHamiltonian model = build_model(c);
  const ParameterLoop loop = build_loop(c);
  if (!c.options.contains("durations") || !c.options["durations"].is_array() ||
      c.options["durations"].empty()) {
    bad("options.durations", "expected a non-empty array of durations");
  }
  std::vector<double> durations;
  for (const Json& d : c.options["durations"]) {
    if (!d.is_number() || !(d.get<double>() > 0.0)) {
      bad("options.durations", "entries must be positive numbers");
    }
    durations.push_back(d.get<double>());
  }
  BerryOptions bopts;
  bopts.gap_tol = c.tolerances.gap_tol;
  bopts.cond_tol_scale = c.tolerances.cond_tol;
  bopts.energy = EnergyPolicy::Instantaneous;
  const double reference = berry_phase(model, loop, c.level, bopts).holonomy.gamma;
  SweepOptions sopts;
  sopts.threads = s.threads;
  const SweepTable t = adiabatic_sweep(model, loop, c.level, durations, reference, sopts);
  Json rows = Json::array();
  for (const SweepRow& row : t.rows) {
    rows.push_back({{"duration", row.duration},
                    {"steps", row.steps},
                    {"gamma", row.gamma},
                    {"leakage", row.leakage},
                    {"error", row.error}});
  }
  Json& res = out.result["result"];
  res["rows"] = rows;
  res["reference"] = phase_json(reference, "berry");
  res["error_exponent"] = t.error_exponent;
  res["leakage_exponent"] = t.leakage_exponent;
  if (s.trace) {
    out.trace_header = {"duration", "gamma", "leakage", "error"};
    for (const SweepRow& row : t.rows) {
      out.trace_rows.push_back({row.duration, row.gamma, row.leakage, row.error});
    }
  }
}

}  // namespace

const std::vector<ModelSchema>& model_catalog() {
  static const std::vector<ModelSchema> catalog = {
      {"spin_half",
       "spin 1/2 in a field B, H = B.sigma/2; parameter point is B",
       {},
       {"latitude", "circular_drive"},
       {"abelian", "nonabelian", "nonadiabatic", "propagate", "sweep"}},
      {"two_spin",
       "two spins 1/2 with Ising coupling J in rotating transverse fields",
       {{"omega01", 1.0, "Larmor frequency of qubit 1 (rad/s)"},
        {"omega02", 0.8, "Larmor frequency of qubit 2 (rad/s)"},
        {"J", 0.0, "Ising coupling (rad/s)"},
        {"omega1", 0.1, "transverse amplitude (rad/s)"},
        {"omega_r", 0.05, "rotation frequency of the transverse field (rad/s)"}},
       {"two_spin"},
       {"abelian", "nonadiabatic", "propagate", "sweep"}},
      {"quadrupole",
       "spin 3/2 quadrupole w0 (J3^2 - 5/4) tilted by theta and rotated about z",
       {{"omega0", 1.0, "quadrupole frequency (rad/s)"},
        {"omega1", 0.1, "rotation frequency (rad/s)"},
        {"theta", 0.5, "tilt of the quadrupole axis (rad)"}},
       {"rotation"},
       {"nonabelian", "quadrupole", "propagate"}},
      {"three_level",
       "3x3 Hermitian template with only arg H12 driven",
       {{"h11", 0.0, "diagonal entry"},
        {"h22", 0.7, "diagonal entry"},
        {"h33", -0.4, "diagonal entry"},
        {"abs12", 1.0, "|H12|"},
        {"abs13", 0.6, "|H13|"},
        {"abs23", 0.8, "|H23|"},
        {"phase13", 0.3, "arg H13"},
        {"phase23", -0.2, "arg H23"}},
       {"phase"},
       {"abelian", "nonabelian", "propagate", "sweep"}},
  };
  return catalog;
}

const std::vector<ModelSchema>& loop_catalog() {
  static const std::vector<ModelSchema> catalog = {
      {"latitude",
       "B = |B| (sin t cos wt, sin t sin wt, cos t)",
       {{"theta", 1.0471975511965976, "polar angle (rad)"},
        {"omega_r", 1.0, "angular velocity (rad/s)"},
        {"steps", 1000, "samples"},
        {"magnitude", 1.0, "|B| (rad/s)"}},
       {},
       {}},
      {"circular_drive",
       "B = (w_perp cos(w_R t + phase0), w_perp sin(w_R t + phase0), w_par)",
       {{"omega_parallel", 1.0, "longitudinal field (rad/s)"},
        {"omega_perp", 0.5, "transverse field (rad/s)"},
        {"omega_r", 0.2, "rotation frequency (rad/s)"},
        {"steps", 1000, "samples"},
        {"phase0", 0.0, "initial azimuth (rad)"}},
       {},
       {}},
      {"rotation",
       "(cos wt, sin wt); omega = 0 takes the model's omega1",
       {{"omega", 0.0, "rotation frequency (rad/s)"}, {"steps", 1000, "samples"}},
       {},
       {}},
      {"phase",
       "phi12 = start + 2 pi winding t, t in [0, 1]",
       {{"start", 0.0, "initial phase (rad)"},
        {"winding", 1, "number of turns"},
        {"steps", 1000, "samples"}},
       {},
       {}},
      {"two_spin",
       "both transverse fields rotate at the model's omega_r",
       {{"steps", 1000, "samples"}},
       {},
       {}},
  };
  return catalog;
}

JobConfig parse_config(const Json& config) {
  if (!config.is_object()) bad("<root>", "expected a JSON object");
  static const std::set<std::string> known = {
      "schema_version", "model", "loop", "method", "level", "tolerances", "options", "output"};
  for (auto it = config.begin(); it != config.end(); ++it) {
    if (!known.count(it.key())) bad(it.key(), "unknown field");
  }
  JobConfig c;
  c.source = config;
  if (!config.contains("schema_version") || !config["schema_version"].is_number_integer()) {
    bad("schema_version", "required integer");
  }
  c.schema_version = config["schema_version"].get<int>();
  if (c.schema_version != kSchemaVersion) {
    bad("schema_version", "unsupported version " + std::to_string(c.schema_version));
  }

  if (!config.contains("model") || !config["model"].is_object()) bad("model", "required object");
  const Json& model = config["model"];
  if (!model.contains("name") || !model["name"].is_string()) bad("model.name", "required string");
  c.model = model["name"].get<std::string>();
  const ModelSchema* ms = find_schema(model_catalog(), c.model);
  if (!ms) fail(ErrorCode::ModelUnknown, "field 'model.name': unknown model '" + c.model + "'");
  c.model_params = resolve_params(model.value("params", Json::object()), *ms, "model.params");

  if (!config.contains("method") || !config["method"].is_string()) bad("method", "required string");
  c.method = config["method"].get<std::string>();
  if (std::find(kMethods.begin(), kMethods.end(), c.method) == kMethods.end()) {
    bad("method", "unknown method '" + c.method + "'");
  }
  if (std::find(ms->methods.begin(), ms->methods.end(), c.method) == ms->methods.end()) {
    bad("method", "method '" + c.method + "' is not available for model '" + c.model + "'");
  }

  const Json loop = config.value("loop", Json::object());
  if (!loop.is_object()) bad("loop", "expected an object");
  c.loop = loop.contains("generator") ? loop["generator"].get<std::string>() : ms->loops.front();
  if (std::find(ms->loops.begin(), ms->loops.end(), c.loop) == ms->loops.end()) {
    bad("loop.generator", "generator '" + c.loop + "' does not fit model '" + c.model + "'");
  }
  const ModelSchema* ls = find_schema(loop_catalog(), c.loop);
  c.loop_params = resolve_params(loop.value("params", Json::object()), *ls, "loop.params");
  if (c.loop_params["steps"].get<double>() < 8) bad("loop.params.steps", "must be >= 8");

  if (config.contains("level")) {
    if (!config["level"].is_number_integer() || config["level"].get<int>() < 0) {
      bad("level", "expected a non-negative integer");
    }
    c.level = config["level"].get<int>();
  }

  if (config.contains("tolerances")) {
    const Json& t = config["tolerances"];
    if (!t.is_object()) bad("tolerances", "expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      double* slot = nullptr;
      if (it.key() == "cond_tol") slot = &c.tolerances.cond_tol;
      if (it.key() == "gap_tol") slot = &c.tolerances.gap_tol;
      if (it.key() == "leak_tol") slot = &c.tolerances.leak_tol;
      if (!slot) bad("tolerances." + it.key(), "unknown tolerance");
      if (!it.value().is_number() || !(it.value().get<double>() > 0.0)) {
        bad("tolerances." + it.key(), "must be a positive number");
      }
      *slot = it.value().get<double>();
    }
  }

  if (config.contains("options")) {
    if (!config["options"].is_object()) bad("options", "expected an object");
    c.options = config["options"];
  }
  if (config.contains("output")) {
    const Json& o = config["output"];
    if (!o.is_object()) bad("output", "expected an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      if (!it.value().is_string() || it.value().get<std::string>().empty()) {
        bad("output." + it.key(), "expected a file name");
      }
      if (it.key() == "result") {
        c.result_file = it.value().get<std::string>();
      } else if (it.key() == "trace") {
        c.trace_file = it.value().get<std::string>();
      } else {
        bad("output." + it.key(), "unknown output");
      }
    }
  }
  return c;
}

JobConfig load_config(const std::string& path) {
  const std::string text = io::read_file(path);
  Json parsed;
  try {
    parsed = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(parsed);
}

JobOutput execute(const JobConfig& c, const RunSettings& s) {
  JobOutput out;
  out.result = Json::object();
  out.result["schema_version"] = kSchemaVersion;
  out.result["method"] = c.method;
  out.result["model"] = {{"name", c.model}, {"params", c.model_params}};
  out.result["loop"] = {{"generator", c.loop}, {"params", c.loop_params}};
  out.result["status"] = "ok";
  out.result["result"] = Json::object();
  out.result["diagnostics"] = Json::object();
  if (c.method == "abelian") run_abelian(c, s, out);
  if (c.method == "nonabelian") run_nonabelian(c, s, out);
  if (c.method == "nonadiabatic") run_nonadiabatic(c, s, out);
  if (c.method == "quadrupole") run_quadrupole(c, s, out);
  if (c.method == "propagate") run_propagate(c, s, out);
  if (c.method == "sweep") run_sweep(c, s, out);
  out.result["provenance"] = {{"config_hash", io::fnv1a_hex(io::dump_json(c.source))},
                              {"loop_steps", c.loop_params["steps"]},
                              {"threads", s.threads}};
  return out;
}

int run(const std::string& config_path, const RunSettings& settings,
        std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::string result_path = (fs::path(settings.out_dir) / "result.json").string();
  try {
    const JobConfig config = load_config(config_path);
    std::error_code ec;
    fs::create_directories(settings.out_dir, ec);
    if (ec) fail(ErrorCode::ConfigInvalid, "cannot create output directory " + settings.out_dir);
    result_path = (fs::path(settings.out_dir) / config.result_file).string();
    const JobOutput job = execute(config, settings);
    io::write_file(result_path, io::dump_json(job.result));
    out << "wrote " << result_path << "\n";
    if (settings.trace && !job.trace_header.empty()) {
      const std::string trace_path = (fs::path(settings.out_dir) / config.trace_file).string();
      io::write_file(trace_path, io::to_csv(job.trace_header, job.trace_rows));
      out << "wrote " << trace_path << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    const bool config_error =
        e.code() == ErrorCode::ConfigInvalid || e.code() == ErrorCode::ModelUnknown;
    if (!config_error) {
      const Json report = {{"schema_version", kSchemaVersion},
                           {"status", "error"},
                           {"error", {{"name", std::string(e.name())}, {"message", e.what()}}}};
      try {
        io::write_file(result_path, io::dump_json(report));
      } catch (const Error&) {
      }
    }
    return config_error ? 2 : 1;
  } catch (const Json::exception& e) {
    err << "error: ConfigInvalid: " << e.what() << "\n";
    return 2;
  }
}

void list_models(std::ostream& out) {
  auto schema_json = [](const ModelSchema& s) {
    Json params = Json::object();
    for (const ParameterSchema& p : s.parameters) {
      params[p.name] = {{"default", p.default_value}, {"description", p.description}};
    }
    Json j = {{"description", s.description}, {"params", params}};
    if (!s.loops.empty()) j["loops"] = s.loops;
    if (!s.methods.empty()) j["methods"] = s.methods;
    return j;
  };
  Json models = Json::object();
  for (const ModelSchema& s : model_catalog()) models[s.name] = schema_json(s);
  Json loops = Json::object();
  for (const ModelSchema& s : loop_catalog()) loops[s.name] = schema_json(s);
  out << io::dump_json({{"models", models}, {"loops", loops}});
}

}  // namespace holonomy
