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

#include "holonomy/errors.hpp"

namespace holonomy {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateLoop: return "DegenerateLoop";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::PivotSingular: return "PivotSingular";
    case ErrorCode::LevelMismatch: return "LevelMismatch";
    case ErrorCode::LevelCrossing: return "LevelCrossing";
    case ErrorCode::LevelDrift: return "LevelDrift";
    case ErrorCode::PoleCrossing: return "PoleCrossing";
    case ErrorCode::DegenerateMinor: return "DegenerateMinor";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::MultiplicityDrift: return "MultiplicityDrift";
    case ErrorCode::FrameDiscontinuity: return "FrameDiscontinuity";
    case ErrorCode::NonClosedGauge: return "NonClosedGauge";
    case ErrorCode::EchoMismatch: return "EchoMismatch";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::LeakageExceeded: return "LeakageExceeded";
    case ErrorCode::InvariantViolated: return "InvariantViolated";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ModelUnknown: return "ModelUnknown";
  }
  return "Unknown";
}

}  // namespace holonomy
