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

#ifndef RYDBERG_CLI_CONFIG_H
#define RYDBERG_CLI_CONFIG_H

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydberg/grape_optimizer.h"

namespace rydberg::cli {

/// Malformed configuration. The message names the offending key as a dotted path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TargetKind { Cat, Dicke, Coefficients };
enum class TargetBasis { Dressed, Bare };

struct TargetSpec {
    TargetKind kind = TargetKind::Cat;
    TargetBasis basis = TargetBasis::Dressed;
    double phase = 0;      // cat
    int n = 0;             // dicke
    CVector coefficients;  // ground-manifold amplitudes, length N + 1
};

enum class InitialKind { Dicke, SpinCoherent };

struct InitialSpec {
    InitialKind kind = InitialKind::Dicke;
    int n = 0;
    double theta = 0;
    double phi = 0;
};

struct SweepConfig {
    std::vector<double> delta_r_mhz;
    std::vector<double> durations_us;
    int steps = 25;
    std::optional<double> delta_uw_ratio;
};

struct VerifyConfig {
    bool expected_uncontrollable = false;
    int oracle_waveforms = 20;
    int oracle_steps = 0;  // 0 means 4N
    double oracle_dt_us = 0.05;
};

struct SimulateConfig {
    std::string waveform_path;
    /// Absent: every step boundary. Empty: final state only.
    std::optional<std::vector<int>> snapshots;
};

struct RunConfig {
    /// The document as read, echoed into result files.
    nlohmann::json source;

    std::optional<SystemParams> params;  // rad/us
    TargetSpec target;
    bool has_target = false;
    InitialSpec initial;
    Regime regime = Regime::FullHilbert;
    OptimizeOptions options;
    /// Total run time; converted to options.dt once the step count is known.
    std::optional<double> duration_us;
    std::string output;

    std::optional<SweepConfig> sweep;
    std::optional<VerifyConfig> verify;
    std::optional<SimulateConfig> simulate;
};

/// Parses a configuration document. Frequencies are MHz in the file and rad/us in memory.
/// Throws ConfigError on unknown keys, wrong types or values that fail validation.
RunConfig parse_config(const nlohmann::json &doc);

RunConfig load_config(const std::string &path);

/// Fills options.steps and options.dt for the configured regime.
OptimizeOptions resolved_options(const RunConfig &config);

DickeVector resolve_initial(const RunConfig &config, const SystemParams &params);

/// Target state in the bare basis. Dressed targets are built from the dressed-ground ladder.
DickeVector resolve_target(const RunConfig &config, const SystemParams &params);

/// Ground-manifold coefficients of the target, for dressed-ground and sweep runs.
CVector target_coefficients(const TargetSpec &target, int n_atoms);

std::string regime_name(Regime regime);
Regime parse_regime(const std::string &name);

}  // namespace rydberg::cli

#endif
