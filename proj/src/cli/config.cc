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

#include "rydberg/cli/config.h"

#include <fstream>
#include <set>

namespace rydberg::cli {

using nlohmann::json;

namespace {

std::string join(const std::string &prefix, const std::string &key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const json &obj, const std::string &where, const std::set<std::string> &allowed) {
    if (!obj.is_object()) {
        throw ConfigError((where.empty() ? std::string("config") : where) + ": expected an object");
    }
    for (const auto &item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown key '" + join(where, item.key()) + "'");
        }
    }
}

double get_double(const json &obj, const std::string &where, const std::string &key) {
    const json &v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError("'" + join(where, key) + "' must be a number");
    }
    return v.get<double>();
}

int64_t get_int(const json &obj, const std::string &where, const std::string &key) {
    const json &v = obj.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("'" + join(where, key) + "' must be an integer");
    }
    return v.get<int64_t>();
}

bool get_bool(const json &obj, const std::string &where, const std::string &key) {
    const json &v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError("'" + join(where, key) + "' must be true or false");
    }
    return v.get<bool>();
}

std::string get_string(const json &obj, const std::string &where, const std::string &key) {
    const json &v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError("'" + join(where, key) + "' must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_doubles(const json &obj, const std::string &where, const std::string &key) {
    const json &v = obj.at(key);
    if (!v.is_array()) {
        throw ConfigError("'" + join(where, key) + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const json &x : v) {
        if (!x.is_number()) {
            throw ConfigError("'" + join(where, key) + "' must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

void require(const json &obj, const std::string &where, const std::string &key) {
    if (!obj.contains(key)) {
        throw ConfigError("missing key '" + join(where, key) + "'");
    }
}

// Rethrows library validation failures with the config section attached.
template <typename F>
void validated(const std::string &where, F &&check) {
    try {
        check();
    } catch (const std::invalid_argument &e) {
        throw ConfigError("'" + where + "': " + e.what());
    }
}

TargetSpec parse_target(const json &t) {
    const std::string w = "target";
    check_keys(t, w, {"kind", "basis", "phase", "n", "real", "imag"});
    require(t, w, "kind");
    TargetSpec spec;
    std::string kind = get_string(t, w, "kind");
    if (t.contains("basis")) {
        std::string basis = get_string(t, w, "basis");
        if (basis == "dressed") {
            spec.basis = TargetBasis::Dressed;
        } else if (basis == "bare") {
            spec.basis = TargetBasis::Bare;
        } else {
            throw ConfigError("'target.basis' must be \"dressed\" or \"bare\"");
        }
    }
    auto forbid = [&](std::initializer_list<const char *> keys) {
        for (const char *k : keys) {
            if (t.contains(k)) {
                throw ConfigError("key '" + join(w, k) + "' does not apply to target kind \"" + kind + "\"");
            }
        }
    };
    if (kind == "cat") {
        spec.kind = TargetKind::Cat;
        forbid({"n", "real", "imag"});
        if (t.contains("phase")) {
            spec.phase = get_double(t, w, "phase");
        }
    } else if (kind == "dicke") {
        spec.kind = TargetKind::Dicke;
        forbid({"phase", "real", "imag"});
        require(t, w, "n");
        spec.n = int(get_int(t, w, "n"));
    } else if (kind == "coefficients") {
        spec.kind = TargetKind::Coefficients;
        forbid({"phase", "n"});
        require(t, w, "real");
        std::vector<double> re = get_doubles(t, w, "real");
        std::vector<double> im = t.contains("imag") ? get_doubles(t, w, "imag") : std::vector<double>(re.size(), 0);
        if (im.size() != re.size()) {
            throw ConfigError("'target.imag' must have the same length as 'target.real'");
        }
        spec.coefficients.resize(Eigen::Index(re.size()));
        for (size_t k = 0; k < re.size(); k++) {
            spec.coefficients[Eigen::Index(k)] = Complex(re[k], im[k]);
        }
    } else {
        throw ConfigError("'target.kind' must be \"cat\", \"dicke\" or \"coefficients\"");
    }
    return spec;
}

InitialSpec parse_initial(const json &t) {
    const std::string w = "initial";
    check_keys(t, w, {"kind", "n", "theta", "phi"});
    require(t, w, "kind");
    InitialSpec spec;
    std::string kind = get_string(t, w, "kind");
    if (kind == "dicke") {
        spec.kind = InitialKind::Dicke;
        if (t.contains("theta") || t.contains("phi")) {
            throw ConfigError("'initial.theta' and 'initial.phi' apply only to kind \"spin_coherent\"");
        }
        if (t.contains("n")) {
            spec.n = int(get_int(t, w, "n"));
        }
    } else if (kind == "spin_coherent") {
        spec.kind = InitialKind::SpinCoherent;
        if (t.contains("n")) {
            throw ConfigError("'initial.n' applies only to kind \"dicke\"");
        }
        require(t, w, "theta");
        require(t, w, "phi");
        spec.theta = get_double(t, w, "theta");
        spec.phi = get_double(t, w, "phi");
    } else {
        throw ConfigError("'initial.kind' must be \"dicke\" or \"spin_coherent\"");
    }
    return spec;
}

}  // namespace

std::string regime_name(Regime regime) {
    return regime == Regime::FullHilbert ? "full_hilbert" : "dressed_ground";
}

Regime parse_regime(const std::string &name) {
    if (name == "full_hilbert") {
        return Regime::FullHilbert;
    }
    if (name == "dressed_ground") {
        return Regime::DressedGround;
    }
    throw ConfigError("regime must be \"full_hilbert\" or \"dressed_ground\", got \"" + name + "\"");
}

RunConfig parse_config(const json &doc) {
    check_keys(doc, "", {"n_atoms", "params_mhz", "target", "initial", "regime", "optimize", "seed", "threads",
                         "output", "sweep", "verify", "simulate"});
    RunConfig config;
    config.source = doc;

    if (doc.contains("params_mhz") || doc.contains("n_atoms")) {
        require(doc, "", "n_atoms");
        require(doc, "", "params_mhz");
        const json &p = doc.at("params_mhz");
        const std::string w = "params_mhz";
        check_keys(p, w, {"omega_r", "delta_r", "omega_uw", "delta_uw"});
        SystemParams params;
        params.n_atoms = int(get_int(doc, "", "n_atoms"));
        for (const char *k : {"omega_r", "delta_r", "omega_uw", "delta_uw"}) {
            require(p, w, k);
        }
        params.omega_r = mhz_to_angular(get_double(p, w, "omega_r"));
        params.delta_r = mhz_to_angular(get_double(p, w, "delta_r"));
        params.omega_uw = mhz_to_angular(get_double(p, w, "omega_uw"));
        params.delta_uw = mhz_to_angular(get_double(p, w, "delta_uw"));
        validated("params_mhz", [&] { params.validate(); });
        config.params = params;
    }

    if (doc.contains("target")) {
        config.target = parse_target(doc.at("target"));
        config.has_target = true;
    }
    if (doc.contains("initial")) {
        config.initial = parse_initial(doc.at("initial"));
    }
    if (doc.contains("regime")) {
        config.regime = parse_regime(get_string(doc, "", "regime"));
    }
    if (doc.contains("seed")) {
        const json &s = doc.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<int64_t>() >= 0)) {
            throw ConfigError("'seed' must be a non-negative integer");
        }
        config.options.seed = s.get<uint64_t>();
    }
    if (doc.contains("threads")) {
        config.options.threads = int(get_int(doc, "", "threads"));
    }
    if (doc.contains("output")) {
        config.output = get_string(doc, "", "output");
    }

    if (doc.contains("optimize")) {
        const json &o = doc.at("optimize");
        const std::string w = "optimize";
        check_keys(o, w, {"steps", "dt_us", "duration_us", "restarts", "max_iterations", "fidelity_goal",
                          "gradient_tolerance", "stop_at_goal", "adiabaticity_warning"});
        OptimizeOptions &opts = config.options;
        if (o.contains("dt_us") && o.contains("duration_us")) {
            throw ConfigError("give only one of 'optimize.dt_us' and 'optimize.duration_us'");
        }
        if (o.contains("steps")) {
            opts.steps = int(get_int(o, w, "steps"));
        }
        if (o.contains("dt_us")) {
            opts.dt = get_double(o, w, "dt_us");
        }
        if (o.contains("duration_us")) {
            config.duration_us = get_double(o, w, "duration_us");
            if (!(*config.duration_us > 0)) {
                throw ConfigError("'optimize.duration_us' must be positive");
            }
        }
        if (o.contains("restarts")) {
            opts.restarts = int(get_int(o, w, "restarts"));
        }
        if (o.contains("max_iterations")) {
            opts.max_iterations = int(get_int(o, w, "max_iterations"));
        }
        if (o.contains("fidelity_goal")) {
            opts.fidelity_goal = get_double(o, w, "fidelity_goal");
        }
        if (o.contains("gradient_tolerance")) {
            opts.gradient_tolerance = get_double(o, w, "gradient_tolerance");
        }
        if (o.contains("stop_at_goal")) {
            opts.stop_at_goal = get_bool(o, w, "stop_at_goal");
        }
        if (o.contains("adiabaticity_warning")) {
            opts.adiabaticity_warning = get_double(o, w, "adiabaticity_warning");
        }
    }
    {
        // dt is checked once resolved; validate everything else now.
        OptimizeOptions probe = config.options;
        probe.dt = 1;
        validated("optimize", [&] { probe.validate(); });
    }

    if (doc.contains("sweep")) {
        const json &s = doc.at("sweep");
        const std::string w = "sweep";
        check_keys(s, w, {"delta_r_mhz", "durations_us", "steps", "delta_uw_ratio"});
        require(s, w, "delta_r_mhz");
        require(s, w, "durations_us");
        SweepConfig sweep;
        sweep.delta_r_mhz = get_doubles(s, w, "delta_r_mhz");
        sweep.durations_us = get_doubles(s, w, "durations_us");
        if (sweep.delta_r_mhz.empty() || sweep.durations_us.empty()) {
            throw ConfigError("'sweep' grids must be non-empty");
        }
        for (double t : sweep.durations_us) {
            if (!(t > 0)) {
                throw ConfigError("'sweep.durations_us' entries must be positive");
            }
        }
        if (s.contains("steps")) {
            sweep.steps = int(get_int(s, w, "steps"));
            if (sweep.steps < 1) {
                throw ConfigError("'sweep.steps' must be at least 1");
            }
        }
        if (s.contains("delta_uw_ratio")) {
            sweep.delta_uw_ratio = get_double(s, w, "delta_uw_ratio");
        }
        config.sweep = sweep;
    }

    if (doc.contains("verify")) {
        const json &v = doc.at("verify");
        const std::string w = "verify";
        check_keys(v, w, {"expected_uncontrollable", "oracle_waveforms", "oracle_steps", "oracle_dt_us"});
        VerifyConfig verify;
        if (v.contains("expected_uncontrollable")) {
            verify.expected_uncontrollable = get_bool(v, w, "expected_uncontrollable");
        }
        if (v.contains("oracle_waveforms")) {
            verify.oracle_waveforms = int(get_int(v, w, "oracle_waveforms"));
            if (verify.oracle_waveforms < 1) {
                throw ConfigError("'verify.oracle_waveforms' must be at least 1");
            }
        }
        if (v.contains("oracle_steps")) {
            verify.oracle_steps = int(get_int(v, w, "oracle_steps"));
            if (verify.oracle_steps < 1) {
                throw ConfigError("'verify.oracle_steps' must be at least 1");
            }
        }
        if (v.contains("oracle_dt_us")) {
            verify.oracle_dt_us = get_double(v, w, "oracle_dt_us");
            if (!(verify.oracle_dt_us > 0)) {
                throw ConfigError("'verify.oracle_dt_us' must be positive");
            }
        }
        config.verify = verify;
    }

    if (doc.contains("simulate")) {
        const json &s = doc.at("simulate");
        const std::string w = "simulate";
        check_keys(s, w, {"waveform", "snapshots"});
        require(s, w, "waveform");
        SimulateConfig sim;
        sim.waveform_path = get_string(s, w, "waveform");
        if (s.contains("snapshots")) {
            const json &list = s.at("snapshots");
            if (!list.is_array()) {
                throw ConfigError("'simulate.snapshots' must be an array of step indices");
            }
            std::vector<int> indices;
            for (const json &x : list) {
                if (!x.is_number_integer() || x.get<int64_t>() < 0) {
                    throw ConfigError("'simulate.snapshots' must hold non-negative integers");
                }
                indices.push_back(x.get<int>());
            }
            sim.snapshots = indices;
        }
        config.simulate = sim;
    }
    return config;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

OptimizeOptions resolved_options(const RunConfig &config) {
    OptimizeOptions opts = config.options;
    if (opts.steps == 0 && config.params) {
        opts.steps = config.regime == Regime::FullHilbert ? 4 * config.params->n_atoms : 2 * config.params->n_atoms;
    }
    if (config.duration_us) {
        opts.dt = *config.duration_us / opts.steps;
    }
    if (!(opts.dt > 0)) {
        throw ConfigError("'optimize' needs 'dt_us' or 'duration_us'");
    }
    return opts;
}

DickeVector resolve_initial(const RunConfig &config, const SystemParams &params) {
    try {
        if (config.initial.kind == InitialKind::Dicke) {
            return dicke_state(params.n_atoms, config.initial.n);
        }
        return spin_coherent_state(params.n_atoms, config.initial.theta, config.initial.phi);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("'initial': ") + e.what());
    }
}

CVector target_coefficients(const TargetSpec &target, int n_atoms) {
    CVector c = CVector::Zero(n_atoms + 1);
    switch (target.kind) {
        case TargetKind::Cat:
            c = cat_state(n_atoms, target.phase).amplitudes.head(n_atoms + 1);
            break;
        case TargetKind::Dicke:
            if (target.n < 0 || target.n > n_atoms) {
                throw ConfigError("'target.n' must lie in [0, " + std::to_string(n_atoms) + "]");
            }
            c[target.n] = 1;
            break;
        case TargetKind::Coefficients:
            if (target.coefficients.size() != n_atoms + 1) {
                throw ConfigError("'target.real' needs " + std::to_string(n_atoms + 1) + " entries");
            }
            if (std::abs(target.coefficients.norm() - 1) > 1e-9) {
                throw ConfigError("'target' coefficients must be normalized");
            }
            c = target.coefficients;
            break;
    }
    return c;
}

DickeVector resolve_target(const RunConfig &config, const SystemParams &params) {
    if (!config.has_target) {
        throw ConfigError("missing key 'target'");
    }
    CVector c = target_coefficients(config.target, params.n_atoms);
    if (config.target.basis == TargetBasis::Dressed || config.regime == Regime::DressedGround) {
        return dressed_target(params, c);
    }
    CVector full = CVector::Zero(basis_size(params.n_atoms));
    full.head(params.n_atoms + 1) = c;
    return {full, params.n_atoms};
}

}  // namespace rydberg::cli
