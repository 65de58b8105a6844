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

#include "rydberg/cli/commands.h"

#include <cmath>
#include <ostream>
#include <random>

#include "rydberg/cli/serialization.h"
#include "rydberg/verification.h"

namespace rydberg::cli {

using nlohmann::json;

namespace {

std::string output_path(const RunConfig &config, const CommandIo &io) {
    std::string path = io.out_path.empty() ? config.output : io.out_path;
    if (path.empty()) {
        throw ConfigError("no output path: pass --out or set 'output'");
    }
    return path;
}

const SystemParams &require_params(const RunConfig &config) {
    if (!config.params) {
        throw ConfigError("missing key 'params_mhz'");
    }
    return *config.params;
}

std::optional<DressedBasis> try_dressed_basis(const SystemParams &params, std::ostream &diag) {
    try {
        return dressed_basis(params);
    } catch (const LabelingAmbiguity &e) {
        diag << "note: " << e.what() << "; reporting bare-basis populations\n";
        return std::nullopt;
    }
}

std::vector<std::string> basis_labels(int n_atoms) {
    std::vector<std::string> out;
    for (int i = 0; i < basis_size(n_atoms); i++) {
        BasisLabel label = basis_label(i, n_atoms);
        out.push_back((label.manifold == Manifold::Ground ? "g" : "e") + std::to_string(label.n));
    }
    return out;
}

json amplitudes_json(const CVector &v) {
    std::vector<double> re(v.size());
    std::vector<double> im(v.size());
    for (Eigen::Index k = 0; k < v.size(); k++) {
        re[k] = v[k].real();
        im[k] = v[k].imag();
    }
    return {{"re", re}, {"im", im}};
}

std::vector<double> populations(const CVector &v) {
    std::vector<double> out(v.size());
    for (Eigen::Index k = 0; k < v.size(); k++) {
        out[k] = std::norm(v[k]);
    }
    return out;
}

void emit_summary(const CommandIo &io, json summary) {
    io.summary << summary.dump() << std::endl;
}

}  // namespace

int cmd_optimize(const RunConfig &config, const CommandIo &io) {
    std::string out = output_path(config, io);
    const SystemParams &params = require_params(config);
    OptimizeOptions opts = resolved_options(config);
    DickeVector psi0 = resolve_initial(config, params);
    DickeVector target = resolve_target(config, params);

    OptimizationResult result;
    if (config.regime == Regime::DressedGround) {
        result = optimize_dressed_ground(params, psi0, target_coefficients(config.target, params.n_atoms), opts);
    } else {
        result = optimize(params, psi0, target, opts);
    }
    for (const std::string &w : result.warnings) {
        io.diag << "warning: " << w << "\n";
    }

    std::optional<DressedBasis> basis = try_dressed_basis(params, io.diag);
    json steps = json::array();
    for (const DickeVector &state : ControlSystem(params).trajectory(result.best_waveform, psi0)) {
        steps.push_back(populations(basis ? basis->to_dressed(state).amplitudes : state.amplitudes));
    }

    int code = result.converged ? kExitOk : kExitBelowGoal;
    json doc = {
        {"command", "optimize"},
        {"config", config.source},
        {"seed", opts.seed},
        {"waveform", waveform_to_json({result.best_waveform, params, config.regime})},
        {"result", result_to_json(result)},
        {"populations", {{"basis", basis ? "dressed" : "bare"}, {"labels", basis_labels(params.n_atoms)}, {"steps", steps}}},
        {"exit_code", code},
    };
    write_atomic(out, doc.dump(2) + "\n");

    io.diag << "best fidelity " << format_double(result.best_fidelity) << " over "
            << result.fidelity_per_restart.size() << " restart(s), " << result.best_waveform.steps() << " steps\n";
    emit_summary(io, {{"command", "optimize"},
                      {"best_fidelity", result.best_fidelity},
                      {"converged", result.converged},
                      {"steps", result.best_waveform.steps()},
                      {"out", out},
                      {"exit_code", code}});
    return code;
}

int cmd_sweep(const RunConfig &config, const CommandIo &io) {
    std::string out = output_path(config, io);
    const SystemParams &params = require_params(config);
    if (!config.sweep) {
        throw ConfigError("missing key 'sweep'");
    }
    if (!config.has_target) {
        throw ConfigError("missing key 'target'");
    }
    if (config.target.basis != TargetBasis::Dressed) {
        throw ConfigError("'target.basis' must be \"dressed\" for sweeps");
    }
    const SweepConfig &sc = *config.sweep;
    SweepSpec spec;
    for (double d : sc.delta_r_mhz) {
        spec.delta_r.push_back(mhz_to_angular(d));
    }
    spec.durations = sc.durations_us;
    spec.steps = sc.steps;
    spec.delta_uw_ratio = sc.delta_uw_ratio;
    OptimizeOptions opts = config.options;
    opts.dt = 1;  // Each cell sets its own.

    Landscape land = sweep_landscape(params, target_coefficients(config.target, params.n_atoms), spec, opts);

    json speed_limits = json::array();
    for (double d : spec.delta_r) {
        SystemParams row = params;
        row.delta_r = d;
        try {
            speed_limits.push_back(speed_limit_estimate(row));
        } catch (const std::exception &) {
            speed_limits.push_back(nullptr);
        }
    }
    int failed = 0;
    for (size_t i = 0; i < land.delta_r.size(); i++) {
        for (size_t j = 0; j < land.durations.size(); j++) {
            if (land.at(i, j).failed) {
                failed++;
                io.diag << "warning: cell (delta_r " << format_double(sc.delta_r_mhz[i]) << " MHz, T "
                        << format_double(sc.durations_us[j]) << " us) failed: " << land.at(i, j).error << "\n";
            }
        }
    }

    json sidecar = {
        {"command", "sweep"},
        {"config", config.source},
        {"seed", opts.seed},
        {"restarts", opts.restarts},
        {"steps", spec.steps},
        {"delta_r_mhz", sc.delta_r_mhz},
        {"speed_limit_us", speed_limits},
        {"landscape", landscape_to_json(land)},
    };
    write_atomic(out, landscape_csv(land, sc.delta_r_mhz));
    write_atomic(out + ".json", sidecar.dump(2) + "\n");

    emit_summary(io, {{"command", "sweep"},
                      {"cells", land.cells.size()},
                      {"failed_cells", failed},
                      {"out", out},
                      {"sidecar", out + ".json"},
                      {"exit_code", kExitOk}});
    return kExitOk;
}

int cmd_verify(const RunConfig &config, const CommandIo &io) {
    std::string out = output_path(config, io);
    const SystemParams &params = require_params(config);
    VerifyConfig vc = config.verify.value_or(VerifyConfig{});
    int n = params.n_atoms;

    LieClosureReport closure = lie_closure_dimension(
        {build_drift(params), collective_spin(n, Axis::X), collective_spin(n, Axis::Y)});
    bool closure_ok = closure.is_controllable != vc.expected_uncontrollable;
    io.diag << "lie closure: " << closure.dimension_found << "/" << closure.dimension_full << ", "
            << (closure.is_controllable ? "controllable" : "not controllable")
            << (vc.expected_uncontrollable ? " (expected not controllable)" : "") << "\n";

    json oracle;
    bool oracle_ok = true;
    if (n <= kMaxFullSpaceAtoms) {
        int steps = vc.oracle_steps ? vc.oracle_steps : 4 * n;
        double worst = 0;
        double worst_residual = 0;
        for (int k = 0; k < vc.oracle_waveforms; k++) {
            std::mt19937_64 rng(derive_seed(config.options.seed, uint64_t(k)));
            std::uniform_real_distribution<double> phase(-M_PI, M_PI);
            std::normal_distribution<double> gauss(0, 1);
            ControlWaveform w{std::vector<double>(steps), vc.oracle_dt_us};
            for (double &p : w.phases) {
                p = phase(rng);
            }
            CVector v(basis_size(n));
            for (auto &x : v) {
                x = Complex(gauss(rng), gauss(rng));
            }
            DickeVector psi0(v.normalized(), n);
            FullSpaceRun run = full_space_run(w, params, psi0);
            worst = std::max(worst, 1 - fidelity(run.state, evolve(w, params, psi0)));
            worst_residual = std::max(worst_residual, run.symmetry_residual);
        }
        oracle_ok = worst < 1e-8;
        oracle = {{"ran", true},
                  {"waveforms", vc.oracle_waveforms},
                  {"steps", steps},
                  {"worst_infidelity", worst},
                  {"worst_symmetry_residual", worst_residual},
                  {"passed", oracle_ok}};
        io.diag << "oracle: worst infidelity " << format_double(worst) << " over " << vc.oracle_waveforms
                << " waveforms\n";
    } else {
        oracle = {{"ran", false}, {"reason", "full-space oracle limited to N <= 4"}};
        io.diag << "oracle: skipped for N = " << n << "\n";
    }

    bool passed = closure_ok && oracle_ok;
    int code = passed ? kExitOk : kExitBelowGoal;
    json doc = {
        {"command", "verify"},
        {"config", config.source},
        {"n_atoms", n},
        {"lie_closure",
         {{"dimension_found", closure.dimension_found},
          {"dimension_full", closure.dimension_full},
          {"depth_reached", closure.depth_reached},
          {"is_controllable", closure.is_controllable},
          {"expected_uncontrollable", vc.expected_uncontrollable},
          {"passed", closure_ok}}},
        {"oracle", oracle},
        {"passed", passed},
        {"exit_code", code},
    };
    write_atomic(out, doc.dump(2) + "\n");
    emit_summary(io, {{"command", "verify"},
                      {"dimension_found", closure.dimension_found},
                      {"dimension_full", closure.dimension_full},
                      {"passed", passed},
                      {"out", out},
                      {"exit_code", code}});
    return code;
}

int cmd_simulate(const RunConfig &config, const CommandIo &io) {
    std::string out = output_path(config, io);
    if (!config.simulate) {
        throw ConfigError("missing key 'simulate'");
    }
    json wdoc = read_json_file(config.simulate->waveform_path);
    // Result documents from the optimize command carry the waveform under "waveform".
    WaveformFile file = waveform_from_json(wdoc.contains("waveform") ? wdoc.at("waveform") : wdoc);
    const SystemParams &params = file.params;
    if (config.params && !(config.params->n_atoms == params.n_atoms)) {
        throw ConfigError("'n_atoms' disagrees with the waveform file");
    }

    DickeVector psi0 = resolve_initial(config, params);
    std::vector<DickeVector> traj = ControlSystem(params).trajectory(file.waveform, psi0);
    size_t last = traj.size() - 1;

    std::vector<size_t> indices;
    if (!config.simulate->snapshots) {
        for (size_t k = 0; k <= last; k++) {
            indices.push_back(k);
        }
    } else if (config.simulate->snapshots->empty()) {
        indices.push_back(last);
    } else {
        for (int k : *config.simulate->snapshots) {
            if (size_t(k) > last) {
                throw ConfigError("'simulate.snapshots' index " + std::to_string(k) + " exceeds the step count " +
                                  std::to_string(last));
            }
            indices.push_back(size_t(k));
        }
    }

    std::optional<DressedBasis> basis = try_dressed_basis(params, io.diag);
    json snapshots = json::array();
    for (size_t k : indices) {
        const DickeVector &bare = traj[k];
        CVector shown = basis ? basis->to_dressed(bare).amplitudes : bare.amplitudes;
        Eigen::MatrixXd rho = (shown * shown.adjoint()).real();
        std::vector<std::vector<double>> rows(rho.rows(), std::vector<double>(rho.cols()));
        for (Eigen::Index i = 0; i < rho.rows(); i++) {
            for (Eigen::Index j = 0; j < rho.cols(); j++) {
                rows[i][j] = rho(i, j);
            }
        }
        json snap = {{"step", k},
                     {"time_us", double(k) * file.waveform.dt},
                     {"bare", amplitudes_json(bare.amplitudes)},
                     {"density_real", rows}};
        if (basis) {
            snap["dressed"] = amplitudes_json(shown);
        }
        snapshots.push_back(snap);
    }

    json doc = {
        {"command", "simulate"},
        {"config", config.source},
        {"waveform", waveform_to_json(file)},
        {"labels", basis_labels(params.n_atoms)},
        {"density_basis", basis ? "dressed" : "bare"},
        {"snapshots", snapshots},
    };
    json summary = {{"command", "simulate"}, {"steps", file.waveform.steps()}, {"snapshots", indices.size()}};
    if (config.has_target) {
        RunConfig with_regime = config;
        with_regime.regime = file.regime;
        double f = fidelity(resolve_target(with_regime, params), traj.back());
        doc["final_fidelity"] = f;
        summary["final_fidelity"] = f;
    }
    if (basis) {
        LeakageReport leak = measure_leakage(params, file.waveform, psi0);
        doc["leakage"] = {{"peak", leak.peak}, {"final", leak.final}};
    }
    write_atomic(out, doc.dump(2) + "\n");
    summary["out"] = out;
    summary["exit_code"] = kExitOk;
    emit_summary(io, summary);
    return kExitOk;
}

}  // namespace rydberg::cli
