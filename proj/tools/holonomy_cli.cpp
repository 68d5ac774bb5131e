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

// holonomy run <config.json> [--out DIR] [--trace] [--threads N]
//              [--convention pole|equator]
// holonomy list-models

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "holonomy/job.hpp"

int main(int argc, char** argv) {
  CLI::App app{"geometric phases and holonomies of parametric Hamiltonians"};
  app.require_subcommand(1);

  std::string config;
  holonomy::RunSettings settings;
  auto* run = app.add_subcommand("run", "run a JSON job description");
  run->add_option("config", config, "job file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", settings.out_dir, "output directory");
  run->add_flag("--trace", settings.trace, "also write the per-step CSV trace");
  run->add_option("--threads", settings.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  const std::map<std::string, holonomy::PhaseConvention> conventions = {
      {"pole", holonomy::PhaseConvention::Pole},
      {"equator", holonomy::PhaseConvention::Equator}};
  run->add_option("--convention", settings.convention,
                  "phase reference for nonadiabatic results")
      ->transform(CLI::CheckedTransformer(conventions, CLI::ignore_case));

  auto* list = app.add_subcommand("list-models", "print the model catalog as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    holonomy::list_models(std::cout);
    return 0;
  }
  return holonomy::run(config, settings, std::cout, std::cerr);
}
