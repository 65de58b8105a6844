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

// Runs every acceptance criterion at its stated tolerance and prints one line per criterion.
// Exit status is the number of failing criteria.

#include <stdarg.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rydberg/grape_optimizer.h"
#include "rydberg/verification.h"

using namespace rydberg;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

SystemParams mhz(int n_atoms, double omega_r, double delta_r, double omega_uw, double delta_uw) {
    return {n_atoms, mhz_to_angular(omega_r), mhz_to_angular(delta_r), mhz_to_angular(omega_uw),
            mhz_to_angular(delta_uw)};
}

CVector cat_coeffs(int n_atoms) {
    CVector c = CVector::Zero(n_atoms + 1);
    c[0] = c[n_atoms] = M_SQRT1_2;
    return c;
}

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

Outcome blockade() {
    double r = blockade_radius(610, mhz_to_angular(5));
    return {std::abs(r - 7.04) <= 0.01, fmt("R_b = %.4f um", r)};
}

Outcome dressed_energies() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> omega(0.5, 60);
    std::uniform_real_distribution<double> delta(0.2, 60);
    std::uniform_real_distribution<double> uw(-20, 20);
    double worst = 0;
    for (int trial = 0; trial < 100; trial++) {
        int n_atoms = 1 + trial % 10;
        SystemParams p{n_atoms, omega(rng), delta(rng) * (trial % 3 ? 1 : -1), 0, uw(rng)};
        DressedBasis b = dressed_basis(p);
        double sign = p.delta_r >= 0 ? 1 : -1;
        worst = std::max(worst, std::abs(b.energy({Manifold::Ground, 0})));
        for (int n = 1; n <= n_atoms; n++) {
            double root = std::sqrt(n * p.omega_r * p.omega_r + p.delta_r * p.delta_r) / 2;
            double centre = n * p.delta_uw - p.delta_r / 2;
            worst = std::max(worst, std::abs(b.energy({Manifold::Ground, n}) - (centre + sign * root)));
            worst = std::max(worst, std::abs(b.energy({Manifold::Excited, n - 1}) - (centre - sign * root)));
        }
    }
    return {worst < 1e-10, fmt("max |E - E_closed| = %.2e rad/us over 100 draws, N <= 10", worst)};
}

Outcome kappa_asymptotics() {
    double worst_ratio = 0;
    for (int n_atoms = 2; n_atoms <= 10; n_atoms++) {
        SystemParams p = mhz(n_atoms, 5, 150, 0, 0);
        worst_ratio = std::max(worst_ratio, std::abs(kappa_exact(p) / kappa_weak(p) - 1));
    }
    // Quadratic fit to the dressed ground ladder. The residual is measured against the quadratic
    // term's full span |c| N^2.
    double worst_fit = 0;
    for (double ratio : {10.0, 20.0, 30.0}) {
        for (int n_atoms = 3; n_atoms <= 10; n_atoms++) {
            DressedBasis b = dressed_basis(mhz(n_atoms, 5, 5 * ratio, 0, 0));
            Eigen::MatrixXd design(n_atoms + 1, 3);
            Eigen::VectorXd e(n_atoms + 1);
            for (int n = 0; n <= n_atoms; n++) {
                design.row(n) << 1, n, double(n) * n;
                e[n] = b.energy({Manifold::Ground, n});
            }
            Eigen::Vector3d fit = design.colPivHouseholderQr().solve(e);
            double residual = (design * fit - e).cwiseAbs().maxCoeff();
            worst_fit = std::max(worst_fit, residual / (std::abs(fit[2]) * n_atoms * n_atoms));
        }
    }
    return {worst_ratio < 0.02 && worst_fit < 0.01,
            fmt("max |k_exact/k_weak - 1| = %.4f at 30x; max fit residual = %.3f%% of |c| N^2", worst_ratio,
                100 * worst_fit)};
}

Outcome gradient_check() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> phase(-M_PI, M_PI);
    std::normal_distribution<double> g(0, 1);
    auto random_state = [&] {
        CVector v(basis_size(4));
        for (auto &x : v) {
            x = Complex(g(rng), g(rng));
        }
        return DickeVector(v.normalized(), 4);
    };
    const double h = 1e-6;
    double worst = 0;
    for (int trial = 0; trial < 50; trial++) {
        SystemParams p = mhz(4, 2 + 4 * std::abs(u(rng)), 3 * u(rng), 4 + 8 * std::abs(u(rng)), 2 * u(rng));
        ControlWaveform w{std::vector<double>(4 + trial % 13), 0.02 + 0.005 * (trial % 11)};
        for (double &x : w.phases) {
            x = phase(rng);
        }
        DickeVector psi0 = random_state();
        DickeVector target = random_state();
        FidelityGradient fg = fidelity_and_gradient(w, p, psi0, target);
        for (size_t k = 0; k < w.steps(); k++) {
            ControlWaveform plus = w;
            ControlWaveform minus = w;
            plus.phases[k] += h;
            minus.phases[k] -= h;
            double fd = (fidelity(target, evolve(plus, p, psi0)) - fidelity(target, evolve(minus, p, psi0))) / (2 * h);
            worst = std::max(worst, std::abs(fd - fg.gradient[k]));
        }
    }
    return {worst < 1e-6, fmt("max |analytic - central difference| = %.2e over 50 N=4 instances", worst)};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> phase(-M_PI, M_PI);
    std::normal_distribution<double> g(0, 1);
    double worst = 0;
    for (int n_atoms : {2, 3}) {
        for (int trial = 0; trial < 20; trial++) {
            SystemParams p = mhz(n_atoms, 1 + 5 * std::abs(u(rng)), 4 * u(rng), 2 + 10 * std::abs(u(rng)), 3 * u(rng));
            ControlWaveform w{std::vector<double>(4 * n_atoms), 0.02 + 0.01 * (trial % 7)};
            for (double &x : w.phases) {
                x = phase(rng);
            }
            CVector v(basis_size(n_atoms));
            for (auto &x : v) {
                x = Complex(g(rng), g(rng));
            }
            DickeVector psi0(v.normalized(), n_atoms);
            worst = std::max(worst, 1 - fidelity(full_space_evolve(w, p, psi0), evolve(w, p, psi0)));
        }
    }
    return {worst < 1e-8, fmt("max infidelity = %.2e over 20 waveforms each at N=2,3", worst)};
}

double best_x_cat(const DickeVector &state) {
    double best = 0;
    for (int k = 0; k < 4; k++) {
        best = std::max(best, max_fidelity_modulo_z_rotation(x_cat_state(state.n_atoms, k * M_PI / 2), state).fidelity);
    }
    return best;
}

Outcome oat_cat() {
    double worst_exact = 1;
    for (int n_atoms = 1; n_atoms <= 10; n_atoms++) {
        double kappa = -0.37;
        DickeVector out = oat_evolve(n_atoms, kappa, M_PI / std::abs(kappa), spin_coherent_state(n_atoms, M_PI / 2, 0));
        worst_exact = std::min(worst_exact, best_x_cat(out));
    }
    // Drift-only evolution of a dressed coherent state at 30x detuning for pi/|kappa|.
    double worst_jcm = 1;
    for (int n_atoms = 2; n_atoms <= 10; n_atoms++) {
        SystemParams p = mhz(n_atoms, 5, 150, 0, 0);
        double kappa = kappa_exact(p);
        double t = M_PI / std::abs(kappa);
        DressedBasis basis = dressed_basis(p);
        DickeVector coherent = spin_coherent_state(n_atoms, M_PI / 2, 0);
        DickeVector end = basis.to_dressed(evolve(ControlWaveform{{0.0}, t}, p, basis.to_bare(coherent)));
        worst_jcm = std::min(worst_jcm,
                             max_fidelity_modulo_z_rotation(oat_evolve(n_atoms, kappa, t, coherent), end).fidelity);
    }
    return {worst_exact >= 1 - 1e-10 && worst_jcm >= 0.99,
            fmt("min exact cat fidelity = 1 - %.1e (N <= 10); min weak-dressing JCM vs OAT = %.5f (N = 2..10)",
                1 - worst_exact, worst_jcm)};
}

Outcome controllability() {
    std::string detail;
    bool pass = true;
    for (int n_atoms = 2; n_atoms <= 5; n_atoms++) {
        SystemParams p = mhz(n_atoms, 5, 2.5, 12.5, 1.25);
        LieClosureReport r = lie_closure_dimension(
            {build_drift(p), collective_spin(n_atoms, Axis::X), collective_spin(n_atoms, Axis::Y)});
        pass = pass && r.dimension_found == r.dimension_full && r.is_controllable;
        detail += fmt("N=%d: %d/%d; ", n_atoms, r.dimension_found, r.dimension_full);
    }
    CMatrix jx = collective_spin(4, Axis::X).topLeftCorner(5, 5);
    CMatrix jy = collective_spin(4, Axis::Y).topLeftCorner(5, 5);
    LieClosureReport spin = lie_closure_dimension({jx, jy});
    pass = pass && spin.dimension_found == 3 && !spin.is_controllable;
    detail += fmt("{Jx, Jy} on J=2: %d", spin.dimension_found);
    return {pass, detail};
}

Outcome figure_3a() {
    SystemParams p = mhz(7, 5, 2.5, 12.5, 1.25);
    OptimizeOptions o;
    o.steps = 28;
    o.dt = 1.0 / 28;
    o.restarts = 50;
    OptimizationResult r = optimize(p, dicke_state(7, 0), dressed_target(p, cat_coeffs(7)), o);
    return {r.best_fidelity >= 0.99 && r.best_waveform.steps() == 28,
            fmt("best F = %.6f after %zu restart(s), s = 28, T = 1 us", r.best_fidelity, r.fidelity_per_restart.size())};
}

Outcome figure_3b() {
    SystemParams p = mhz(7, 5, 15, 0.1, -0.4);
    OptimizeOptions o;
    o.steps = 14;
    o.dt = 25.0 / 14;
    o.restarts = 50;
    OptimizationResult r = optimize_dressed_ground(p, cat_coeffs(7), o);
    return {r.best_fidelity >= 0.99 && r.leakage && r.leakage->peak < 0.05 && r.best_waveform.steps() == 14,
            fmt("best F = %.6f after %zu restart(s), peak leakage = %.2e, s = 14, T = 25 us", r.best_fidelity,
                r.fidelity_per_restart.size(), r.leakage ? r.leakage->peak : NAN)};
}

Outcome figure_2() {
    // Six-atom cat from |g,0>, s = 25, microwave halfway between the manifolds.
    SystemParams base = mhz(6, 5, 0, 2.5, 0);
    SweepSpec spec;
    std::vector<double> delta_mhz = {2.5, 5, 7.5, 10};
    for (double d : delta_mhz) {
        spec.delta_r.push_back(mhz_to_angular(d));
    }
    spec.durations = {0.5, 1, 2, 4, 8, 16};
    spec.steps = 25;
    spec.delta_uw_ratio = 0.5;
    OptimizeOptions o;
    o.dt = 1;
    o.restarts = 20;
    o.seed = 1;
    Landscape land = sweep_landscape(base, cat_coeffs(6), spec, o);

    bool pass = true;
    double previous = 0;
    std::ostringstream detail;
    int dips = 0;
    for (size_t i = 0; i < delta_mhz.size(); i++) {
        SystemParams row = base;
        row.delta_r = spec.delta_r[i];
        row.delta_uw = 0.5 * row.delta_r;
        double limit = speed_limit_estimate(row);
        double threshold = NAN;
        for (size_t j = 0; j < spec.durations.size(); j++) {
            const SweepCell &c = land.at(i, j);
            if (std::isnan(threshold) && !c.failed && c.best_fidelity >= 0.99) {
                threshold = spec.durations[j];
            } else if (!std::isnan(threshold) && !(c.best_fidelity >= 0.99)) {
                dips++;
            }
        }
        bool row_ok = !std::isnan(threshold) && threshold >= previous && threshold <= 3 * limit && threshold >= limit / 3;
        pass = pass && row_ok;
        if (!std::isnan(threshold)) {
            previous = threshold;
        }
        detail << fmt("D=%.1f: T*=%g (pi/k=%.2f)%s; ", delta_mhz[i], threshold, limit, row_ok ? "" : " BAD");
    }
    detail << dips << " cell(s) above threshold below 0.99";
    return {pass, detail.str()};
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 blockade radius", blockade},
        {"2 dressed-energy closed form", dressed_energies},
        {"3 kappa asymptotics", kappa_asymptotics},
        {"4 gradient check", gradient_check},
        {"5 oracle equivalence", oracle_equivalence},
        {"6 one-axis-twisting cat", oat_cat},
        {"7 controllability", controllability},
        {"8 fast full-space cat (N=7, 1 us)", figure_3a},
        {"9 dressed-ground cat (N=7, 25 us)", figure_3b},
        {"10 fidelity plateau (N=6 grid)", figure_2},
    };
    int failures = 0;
    for (auto &[name, run] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s  criterion %-36s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                    seconds);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures;
}
