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

#include "rydberg/cli/serialization.h"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rydberg/cli/config.h"

namespace rydberg::cli {

using nlohmann::json;

namespace {

json number_or_null(double x) {
    return std::isnan(x) ? json(nullptr) : json(x);
}

double number_from(const json &x) {
    return x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>();
}

json params_json(const SystemParams &p, bool mhz) {
    auto f = [&](double x) { return mhz ? angular_to_mhz(x) : x; };
    return {{"omega_r", f(p.omega_r)}, {"delta_r", f(p.delta_r)}, {"omega_uw", f(p.omega_uw)}, {"delta_uw", f(p.delta_uw)}};
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "NaN";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json waveform_to_json(const WaveformFile &file) {
    return {
        {"n_atoms", file.params.n_atoms},
        {"dt_us", file.waveform.dt},
        {"phases_rad", file.waveform.phases},
        {"params_mhz", params_json(file.params, true)},
        {"params_rad_per_us", params_json(file.params, false)},
        {"regime", regime_name(file.regime)},
    };
}

WaveformFile waveform_from_json(const json &doc) {
    try {
        WaveformFile file;
        file.params.n_atoms = doc.at("n_atoms").get<int>();
        file.waveform.dt = doc.at("dt_us").get<double>();
        file.waveform.phases = doc.at("phases_rad").get<std::vector<double>>();
        bool exact = doc.contains("params_rad_per_us");
        const json &p = exact ? doc.at("params_rad_per_us") : doc.at("params_mhz");
        auto f = [&](const char *key) {
            double x = p.at(key).get<double>();
            return exact ? x : mhz_to_angular(x);
        };
        file.params.omega_r = f("omega_r");
        file.params.delta_r = f("delta_r");
        file.params.omega_uw = f("omega_uw");
        file.params.delta_uw = f("delta_uw");
        file.regime = doc.contains("regime") ? parse_regime(doc.at("regime").get<std::string>()) : Regime::FullHilbert;
        file.params.validate();
        file.waveform.validate();
        return file;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed waveform document: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("invalid waveform document: ") + e.what());
    }
}

json result_to_json(const OptimizationResult &r) {
    json doc = {
        {"best_waveform", {{"dt_us", r.best_waveform.dt}, {"phases_rad", r.best_waveform.phases}}},
        {"best_fidelity", r.best_fidelity},
        {"fidelity_per_restart", r.fidelity_per_restart},
        {"iterations_used", r.iterations_used},
        {"fidelity_traces", r.fidelity_traces},
        {"gradient_norms", r.gradient_norms},
        {"converged", r.converged},
        {"regime", regime_name(r.regime)},
        {"warnings", r.warnings},
    };
    doc["leakage"] = r.leakage ? json{{"peak", r.leakage->peak}, {"final", r.leakage->final}} : json(nullptr);
    return doc;
}

OptimizationResult result_from_json(const json &doc) {
    OptimizationResult r;
    r.best_waveform.dt = doc.at("best_waveform").at("dt_us").get<double>();
    r.best_waveform.phases = doc.at("best_waveform").at("phases_rad").get<std::vector<double>>();
    r.best_fidelity = doc.at("best_fidelity").get<double>();
    r.fidelity_per_restart = doc.at("fidelity_per_restart").get<std::vector<double>>();
    r.iterations_used = doc.at("iterations_used").get<std::vector<int>>();
    r.fidelity_traces = doc.at("fidelity_traces").get<std::vector<std::vector<double>>>();
    r.gradient_norms = doc.at("gradient_norms").get<std::vector<double>>();
    r.converged = doc.at("converged").get<bool>();
    r.regime = parse_regime(doc.at("regime").get<std::string>());
    r.warnings = doc.at("warnings").get<std::vector<std::string>>();
    if (!doc.at("leakage").is_null()) {
        r.leakage = LeakageReport{doc.at("leakage").at("peak").get<double>(), doc.at("leakage").at("final").get<double>()};
    }
    return r;
}

std::string landscape_csv(const Landscape &landscape, const std::vector<double> &delta_r_labels) {
    std::ostringstream out;
    out << "delta_r\\duration";
    for (double t : landscape.durations) {
        out << ',' << format_double(t);
    }
    out << '\n';
    for (size_t i = 0; i < landscape.delta_r.size(); i++) {
        out << format_double(delta_r_labels.at(i));
        for (size_t j = 0; j < landscape.durations.size(); j++) {
            out << ',' << format_double(landscape.at(i, j).best_fidelity);
        }
        out << '\n';
    }
    return out.str();
}

json landscape_to_json(const Landscape &landscape) {
    json cells = json::array();
    for (size_t i = 0; i < landscape.delta_r.size(); i++) {
        for (size_t j = 0; j < landscape.durations.size(); j++) {
            const SweepCell &c = landscape.at(i, j);
            cells.push_back({
                {"row", i},
                {"column", j},
                {"best_fidelity", number_or_null(c.best_fidelity)},
                {"failed", c.failed},
                {"error", c.error},
                {"seed", c.seed},
                {"iterations_used", c.iterations_used},
                {"fidelity_per_restart", c.fidelity_per_restart},
            });
        }
    }
    return {{"delta_r_rad_per_us", landscape.delta_r}, {"durations_us", landscape.durations}, {"cells", cells}};
}

Landscape landscape_from_json(const json &doc) {
    Landscape out;
    out.delta_r = doc.at("delta_r_rad_per_us").get<std::vector<double>>();
    out.durations = doc.at("durations_us").get<std::vector<double>>();
    out.cells.resize(out.delta_r.size() * out.durations.size());
    for (const json &c : doc.at("cells")) {
        SweepCell &cell = out.cells.at(c.at("row").get<size_t>() * out.durations.size() + c.at("column").get<size_t>());
        cell.best_fidelity = number_from(c.at("best_fidelity"));
        cell.failed = c.at("failed").get<bool>();
        cell.error = c.at("error").get<std::string>();
        cell.seed = c.at("seed").get<uint64_t>();
        cell.iterations_used = c.at("iterations_used").get<std::vector<int>>();
        cell.fidelity_per_restart = c.at("fidelity_per_restart").get<std::vector<double>>();
    }
    return out;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_atomic(const std::string &path, const std::string &content) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
    }
}

}  // namespace rydberg::cli
