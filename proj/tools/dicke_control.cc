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

#include <iostream>

#include "CLI11.hpp"
#include "rydberg/cli/commands.h"

using namespace rydberg::cli;

int main(int argc, char **argv) {
    CLI::App app{"Optimal control of Rydberg-blockaded symmetric ensembles"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<uint64_t> seed;
    std::optional<int> threads;

    using Command = int (*)(const RunConfig &, const CommandIo &);
    std::vector<std::pair<CLI::App *, Command>> commands = {
        {app.add_subcommand("optimize", "Search for a phase waveform reaching the target"), cmd_optimize},
        {app.add_subcommand("sweep", "Fidelity landscape over Rydberg detuning and run time"), cmd_sweep},
        {app.add_subcommand("verify", "Controllability rank test and full-space oracle"), cmd_verify},
        {app.add_subcommand("simulate", "Replay a waveform and record the trajectory"), cmd_simulate},
    };
    for (auto &[sub, fn] : commands) {
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_path, "Output file (overrides 'output')");
        sub->add_option("--seed", seed, "Base seed (overrides 'seed')");
        sub->add_option("--threads", threads, "Worker threads (overrides 'threads')")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, std::cerr, std::cerr);
        return code == 0 ? 0 : kExitError;
    }

    try {
        RunConfig config = load_config(config_path);
        if (seed) {
            config.options.seed = *seed;
        }
        if (threads) {
            config.options.threads = *threads;
        }
        for (auto &[sub, fn] : commands) {
            if (sub->parsed()) {
                return fn(config, CommandIo{out_path, std::cout, std::cerr});
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
