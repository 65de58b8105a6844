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

#ifndef RYDBERG_CLI_COMMANDS_H
#define RYDBERG_CLI_COMMANDS_H

#include <iosfwd>
#include <string>

#include "rydberg/cli/config.h"

namespace rydberg::cli {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBelowGoal = 2;

/// Where a command writes. `summary` receives one JSON line; `diag` receives human-readable notes.
struct CommandIo {
    std::string out_path;
    std::ostream &summary;
    std::ostream &diag;
};

/// Writes the result document; returns kExitOk when the goal is met, kExitBelowGoal otherwise.
int cmd_optimize(const RunConfig &config, const CommandIo &io);

/// Writes the landscape CSV to out_path and the provenance sidecar to out_path + ".json".
int cmd_sweep(const RunConfig &config, const CommandIo &io);

/// Controllability rank test plus the full-space oracle (N <= 4). kExitOk iff every check
/// matches expectations, kExitBelowGoal otherwise.
int cmd_verify(const RunConfig &config, const CommandIo &io);

/// Replays a waveform file and writes the trajectory document.
int cmd_simulate(const RunConfig &config, const CommandIo &io);

}  // namespace rydberg::cli

#endif
