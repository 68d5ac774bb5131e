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

#include <stdexcept>
#include <string>
#include <string_view>

namespace holonomy {

enum class ErrorCode {
  InvalidArgument,
  DegenerateLoop,
  NotHermitian,
  PivotSingular,
  LevelMismatch,
  LevelCrossing,
  LevelDrift,
  PoleCrossing,
  DegenerateMinor,
  DomainViolation,
  DegenerateSpectrum,
  MultiplicityDrift,
  FrameDiscontinuity,
  NonClosedGauge,
  EchoMismatch,
  StepTooCoarse,
  LeakageExceeded,
  InvariantViolated,
  ConfigInvalid,
  ModelUnknown,
};

std::string_view error_name(ErrorCode code);

/// Every failure raised by the library carries a named code so that the CLI
/// can report it and map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace holonomy
