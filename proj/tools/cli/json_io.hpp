// Copyright 2026 The stellar-witness Authors
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

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stellar/boundary.hpp"
#include "stellar/multimode.hpp"
#include "stellar/threshold.hpp"
#include "stellar/witness.hpp"

namespace stellar::io {

using Json = nlohmann::ordered_json;

/// Deterministic JSON text: two-space indent, floats as %.17g (always with a
/// decimal point or exponent), scalar arrays on one line, trailing newline.
std::string dump(const Json& j);

/// %.17g with a guaranteed decimal point; NaN/inf are rejected.
std::string format_double(double x);

/// Parses JSON text; syntax errors become DataError with line and column.
Json parse(const std::string& text, const std::string& source);

std::string read_file(const std::filesystem::path& path);
/// Writes via a temporary file in the same directory and an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

Json complex_json(Complex z);
Complex complex_from(const Json& j, const std::string& field);

// ---- states -------------------------------------------------------------

using StateValue = std::variant<FockVector, FockDensity>;

StateValue state_from_json(const Json& j, const std::string& field = "state");
Json state_to_json(const FockVector& psi);
Json state_to_json(const FockDensity& rho);
MultimodeState multimode_state_from_json(const Json& j, std::size_t modes, const std::string& field);

// ---- witnesses ----------------------------------------------------------

/// A parsed witness file. `source` is the original object, echoed into
/// result files.
struct WitnessDocument {
  Json source;
  std::optional<WitnessOperator> single;
  std::optional<MultimodeWitness> multimode;
};

WitnessDocument witness_from_json(const Json& j);

// ---- optimizer config and results -----------------------------------------

/// Reads any subset of the OptimizerConfig fields on top of `base`.
OptimizerConfig config_from_json(const Json& j, OptimizerConfig base = {});
/// Every field that influences results (threads excluded).
Json config_to_json(const OptimizerConfig& config);

Json params_to_json(const GaussianParams& p);
GaussianParams params_from_json(const Json& j, const std::string& field);
Json diagnostics_to_json(const ThresholdDiagnostics& d);

Json threshold_result_to_json(const Json& witness, const ThresholdResult& r,
                              const OptimizerConfig& config);
Json multimode_result_to_json(const Json& witness, const MultimodeThresholdResult& r,
                              const OptimizerConfig& config);

// ---- boundary --------------------------------------------------------------

Json family_to_json(const WitnessFamily& f);
WitnessFamily family_from_json(const Json& j);

/// Header plus one row per (omega, rank), ranks in order.
std::string boundary_csv(const std::vector<BoundaryCurve>& curves);
/// Inverse of boundary_csv; hulls are rebuilt with gift_wrap.
std::vector<BoundaryCurve> curves_from_csv(const std::string& text, const std::string& source);
Json hull_to_json(const BoundaryCurve& curve);

}  // namespace stellar::io
