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

#include <string>
#include <vector>

#include <json.hpp>

#include "holonomy/linalg.hpp"

namespace holonomy::io {

using Json = nlohmann::json;

/// Pretty-printed JSON with keys in sorted order and every floating-point
/// value written with 17 significant digits, so equal inputs give identical
/// bytes. Non-finite numbers are rejected.
std::string dump_json(const Json& value, int indent = 2);

/// [re, im]
Json complex_to_json(Complex z);

/// Row-major list of rows of [re, im] pairs.
Json matrix_to_json(const Matrix& m);

/// As matrix_to_json, after checking ||U^dagger U - I|| <= tol.
Json unitary_to_json(const Matrix& u, double tol = 1e-9);

Json real_vector_to_json(const RealVector& v);

/// 17-digit rendering of one double.
std::string format_double(double x);

/// CSV text with a header row; values written with format_double.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

/// 64-bit FNV-1a hash as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace holonomy::io
