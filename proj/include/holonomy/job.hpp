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

#include <iosfwd>
#include <string>
#include <vector>

#include "holonomy/io.hpp"
#include "holonomy/nonadiabatic.hpp"

namespace holonomy {

inline constexpr int kSchemaVersion = 1;

struct ParameterSchema {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct ModelSchema {
  std::string name;
  std::string description;
  std::vector<ParameterSchema> parameters;
  std::vector<std::string> loops;  ///< compatible loop generators, default first
  std::vector<std::string> methods;
};

const std::vector<ModelSchema>& model_catalog();
const std::vector<ModelSchema>& loop_catalog();

struct Tolerances {
  double cond_tol = 1e-8;  ///< relative pivot threshold
  double gap_tol = 1e-6;
  double leak_tol = 1e-2;
};

struct JobConfig {
  int schema_version = kSchemaVersion;
  std::string model;
  io::Json model_params = io::Json::object();
  std::string loop;
  io::Json loop_params = io::Json::object();
  std::string method;
  int level = 0;
  Tolerances tolerances;
  io::Json options = io::Json::object();
  std::string result_file = "result.json";
  std::string trace_file = "trace.csv";
  io::Json source;  ///< the parsed input, for the provenance hash
};

/// Validates structure, names and tolerances. Throws ConfigInvalid naming
/// the offending field, or ModelUnknown.
JobConfig parse_config(const io::Json& config);
JobConfig load_config(const std::string& path);

struct RunSettings {
  std::string out_dir = ".";
  bool trace = false;
  int threads = 1;
  PhaseConvention convention = PhaseConvention::Equator;
};

struct JobOutput {
  io::Json result;
  std::vector<std::string> trace_header;
  std::vector<std::vector<double>> trace_rows;
};

/// Runs the job in memory.
JobOutput execute(const JobConfig& config, const RunSettings& settings);

/// Loads, runs and writes the result (and the trace when requested). Returns
/// 0 on success, 1 for numeric failures and 2 for configuration errors; a
/// diagnostic naming the error goes to `err`.
int run(const std::string& config_path, const RunSettings& settings,
        std::ostream& out, std::ostream& err);

/// Writes the catalog of models and loop generators as JSON.
void list_models(std::ostream& out);

}  // namespace holonomy
