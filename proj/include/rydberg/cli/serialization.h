// Copyright 2026 The Rydberg Dicke Control Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RYDBERG_CLI_SERIALIZATION_H
#define RYDBERG_CLI_SERIALIZATION_H

#include <string>

#include "json.hpp"
#include "rydberg/grape_optimizer.h"

namespace rydberg::cli {

// Doubles are written in shortest round-trip form, so every reader below restores the exact
// bits. NaN is written as null.

struct WaveformFile {
    ControlWaveform waveform;
    SystemParams params;
    Regime regime = Regime::FullHilbert;

    bool operator==(const WaveformFile &other) const = default;
};

/// {n_atoms, dt_us, phases_rad, params_mhz, params_rad_per_us, regime}. The rad/us copy of the
/// parameters keeps the round trip exact; readers fall back to params_mhz when it is absent.
nlohmann::json waveform_to_json(const WaveformFile &file);
WaveformFile waveform_from_json(const nlohmann::json &doc);

nlohmann::json result_to_json(const OptimizationResult &result);
OptimizationResult result_from_json(const nlohmann::json &doc);

/// Header row is the duration grid, header column the detuning grid, both in the caller's units.
std::string landscape_csv(const Landscape &landscape, const std::vector<double> &delta_r_labels);

nlohmann::json landscape_to_json(const Landscape &landscape);
Landscape landscape_from_json(const nlohmann::json &doc);

/// %.17g, or NaN.
std::string format_double(double x);

nlohmann::json read_json_file(const std::string &path);

/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::string &path, const std::string &content);

}  // namespace rydberg::cli

#endif
