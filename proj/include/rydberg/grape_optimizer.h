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

#ifndef RYDBERG_GRAPE_OPTIMIZER_H
#define RYDBERG_GRAPE_OPTIMIZER_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rydberg/propagation.h"

namespace rydberg {

enum class Regime { FullHilbert, DressedGround };

struct OptimizeOptions {
    int steps = 0;  // 0 picks the regime default: 4N for full Hilbert, 2N for dressed ground.
    double dt = 0;  // us
    int restarts = 20;
    int max_iterations = 2000;
    double fidelity_goal = 1 - 1e-4;
    double gradient_tolerance = 1e-8;
    uint64_t seed = 0;
    int threads = 1;
    /// Stop launching restarts once one of them reaches fidelity_goal.
    bool stop_at_goal = true;
    /// Dressed-ground mode warns when adiabaticity_parameter exceeds this.
    double adiabaticity_warning = 0.05;

    void validate() const;
};

/// Dressed-excited population along the best waveform.
struct LeakageReport {
    double peak = 0;
    double final = 0;

    bool operator==(const LeakageReport &other) const = default;
};

struct OptimizationResult {
    ControlWaveform best_waveform;
    double best_fidelity = 0;
    std::vector<double> fidelity_per_restart;
    std::vector<int> iterations_used;
    /// Fidelity before the first step and after every accepted step, per restart.
    std::vector<std::vector<double>> fidelity_traces;
    /// Final gradient infinity-norm per restart.
    std::vector<double> gradient_norms;
    bool converged = false;
    Regime regime = Regime::FullHilbert;
    std::optional<LeakageReport> leakage;
    std::vector<std::string> warnings;

    bool operator==(const OptimizationResult &other) const = default;
};

/// GRAPE search from psi0 toward target: BFGS ascent with backtracking line search, started from
/// i.i.d. uniform phases on [-pi, pi) for each restart. Deterministic for a given seed,
/// independent of the thread count.
///
/// When psi0 already reaches the goal, returns immediately with an empty waveform and no
/// iterations. Throws std::invalid_argument on dimension mismatch and std::runtime_error if the
/// fidelity becomes non-finite.
OptimizationResult optimize(const SystemParams &params, const DickeVector &psi0, const DickeVector &target,
                            const OptimizeOptions &opts);

/// Targets sum_n coeffs[n] |g~,n> from |g,0>, defaulting to 2N steps, and reports leakage into
/// the dressed-excited manifold.
OptimizationResult optimize_dressed_ground(const SystemParams &params, const CVector &coeffs,
                                           const OptimizeOptions &opts);

/// Same, from an explicit initial state.
OptimizationResult optimize_dressed_ground(const SystemParams &params, const DickeVector &psi0, const CVector &coeffs,
                                           const OptimizeOptions &opts);

/// Dressed-excited population at step boundaries and `samples_per_step` points inside each step.
LeakageReport measure_leakage(const SystemParams &params, const ControlWaveform &waveform, const DickeVector &psi0,
                              int samples_per_step = 8);

/// Fidelity landscape over Rydberg detuning and total run time.
struct SweepSpec {
    std::vector<double> delta_r;    // rad/us
    std::vector<double> durations;  // us
    int steps = 25;
    /// When set, each row uses delta_uw = ratio * delta_r instead of the base detuning.
    std::optional<double> delta_uw_ratio;
};

struct SweepCell {
    double best_fidelity = 0;
    bool failed = false;
    std::string error;
    uint64_t seed = 0;
    std::vector<int> iterations_used;
    std::vector<double> fidelity_per_restart;
};

struct Landscape {
    std::vector<double> delta_r;
    std::vector<double> durations;
    /// Row-major, cells[i * durations.size() + j] for delta_r[i], durations[j].
    std::vector<SweepCell> cells;

    const SweepCell &at(size_t i, size_t j) const {
        return cells[i * durations.size() + j];
    }
};

/// Runs optimize from |g,0> to the dressed target in every cell. Cell failures are recorded,
/// not thrown. opts.threads spreads cells over threads; each cell runs single-threaded.
Landscape sweep_landscape(const SystemParams &base_params, const CVector &target_coeffs, const SweepSpec &spec,
                          const OptimizeOptions &opts);

/// pi / |kappa_exact|, the one-axis-twisting time to make a cat state.
double speed_limit_estimate(const SystemParams &params);

/// Seed for restart or cell `index` derived from a base seed.
uint64_t derive_seed(uint64_t base, uint64_t index);

}  // namespace rydberg

#endif
