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

#include "rydberg/propagation.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace rydberg;

namespace {

CMatrix random_hermitian(int d, std::mt19937_64 &rng, double scale) {
    std::normal_distribution<double> g(0, scale);
    CMatrix a(d, d);
    for (int i = 0; i < d; i++) {
        for (int j = 0; j < d; j++) {
            a(i, j) = Complex(g(rng), g(rng));
        }
    }
    return (a + a.adjoint()) / 2.0;
}

DickeVector random_state(int n_atoms, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0, 1);
    CVector v(basis_size(n_atoms));
    for (auto &x : v) {
        x = Complex(g(rng), g(rng));
    }
    return {v.normalized(), n_atoms};
}

SystemParams random_params(int n_atoms, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    return {n_atoms, mhz_to_angular(2 + 4 * std::abs(u(rng))), mhz_to_angular(3 * u(rng)),
            mhz_to_angular(4 + 8 * std::abs(u(rng))), mhz_to_angular(2 * u(rng))};
}

ControlWaveform random_waveform(int steps, double dt, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(-M_PI, M_PI);
    ControlWaveform w{std::vector<double>(steps), dt};
    for (double &p : w.phases) {
        p = u(rng);
    }
    return w;
}

}  // namespace

TEST(step_propagator, zero_and_diagonal) {
    ASSERT_LE((step_propagator(CMatrix::Zero(5, 5), 0.3) - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-15);
    Eigen::VectorXd h(4);
    h << -2.0, 0.5, 3.0, 7.25;
    CMatrix u = step_propagator(CMatrix(h.cast<Complex>().asDiagonal()), 0.2);
    for (int k = 0; k < 4; k++) {
        ASSERT_NEAR(std::abs(u(k, k) - std::polar(1.0, -h[k] * 0.2)), 0, 1e-14);
    }
    ASSERT_NEAR((u - CMatrix(u.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0, 1e-15);
}

TEST(step_propagator, unitary_for_random_hermitian) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; trial++) {
        int d = 2 + trial % 20;
        CMatrix u = step_propagator(random_hermitian(d, rng, 10), 0.37);
        ASSERT_LE((u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(step_propagator, agrees_with_taylor_series) {
    std::mt19937_64 rng(8);
    CMatrix h = random_hermitian(6, rng, 1);
    double dt = 0.1;
    CMatrix term = CMatrix::Identity(6, 6);
    CMatrix sum = term;
    for (int k = 1; k < 30; k++) {
        term = term * (Complex(0, -dt) * h) / double(k);
        sum += term;
    }
    ASSERT_LE((step_propagator(h, dt) - sum).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(step_propagator, rejects_non_hermitian) {
    CMatrix h = CMatrix::Zero(3, 3);
    h(0, 1) = 1e-6;
    ASSERT_THROW(step_propagator(h, 1), std::invalid_argument);
    ASSERT_THROW(step_propagator(CMatrix::Zero(2, 3), 1), std::invalid_argument);
}

TEST(evolve, trivial_dynamics) {
    SystemParams p{3, 0, 1.3, 0, 0};
    std::mt19937_64 rng(1);
    DickeVector psi = dicke_state(3, 2);
    DickeVector out = evolve(random_waveform(5, 0.4, rng), p, psi);
    ASSERT_NEAR(fidelity(out, psi), 1, 1e-14);
}

TEST(evolve, single_atom_pi_pulse) {
    // H = (omega_uw/2) J_x = (omega_uw/4) sigma_x, so a pi rotation takes 2 pi / omega_uw.
    SystemParams p{1, 0, 1.0, 3.0, 0};
    ControlWaveform w{{0.0}, 2 * M_PI / p.omega_uw};
    DickeVector out = evolve(w, p, dicke_state(1, 0));
    ASSERT_NEAR(std::abs(out.amplitudes[1] - Complex(0, -1)), 0, 1e-14);
    ASSERT_NEAR(std::abs(out.amplitudes[0]), 0, 1e-14);
}

TEST(evolve, norm_composition_and_periodicity) {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 30; trial++) {
        int n_atoms = 1 + trial % 6;
        SystemParams p = random_params(n_atoms, rng);
        ControlSystem system(p);
        DickeVector psi = random_state(n_atoms, rng);
        ControlWaveform w = random_waveform(3 + trial % 9, 0.05 + 0.01 * trial, rng);

        DickeVector out = system.evolve(w, psi);
        ASSERT_NEAR(out.norm(), 1, 1e-10);

        size_t split = w.steps() / 2 + 1;
        ControlWaveform head{{w.phases.begin(), w.phases.begin() + split}, w.dt};
        ControlWaveform tail{{w.phases.begin() + split, w.phases.end()}, w.dt};
        if (!tail.phases.empty()) {
            DickeVector composed = system.evolve(tail, system.evolve(head, psi));
            ASSERT_LE((composed.amplitudes - out.amplitudes).cwiseAbs().maxCoeff(), 1e-10);
        }

        ControlWaveform shifted = w;
        for (double &phase : shifted.phases) {
            phase += 2 * M_PI;
        }
        for (size_t k = 0; k < w.steps(); k++) {
            CMatrix u1 = step_propagator(system.hamiltonian(w.phases[k]), w.dt);
            CMatrix u2 = step_propagator(system.hamiltonian(shifted.phases[k]), w.dt);
            ASSERT_LE((u1 - u2).cwiseAbs().maxCoeff(), 1e-10);
        }

        std::vector<DickeVector> traj = system.trajectory(w, psi);
        ASSERT_EQ(traj.size(), w.steps() + 1);
        ASSERT_LE((traj.back().amplitudes - out.amplitudes).cwiseAbs().maxCoeff(), 0);
    }
}

TEST(evolve, dimension_mismatch) {
    SystemParams p{3, 1, 1, 1, 0};
    ASSERT_THROW(evolve(ControlWaveform{{0.1}, 0.1}, p, dicke_state(2, 0)), std::invalid_argument);
    ASSERT_THROW(evolve(ControlWaveform{{0.1}, 0}, p, dicke_state(3, 0)), std::invalid_argument);
}

TEST(evolve, empty_waveform_is_identity) {
    SystemParams p{3, 1, 1, 1, 0};
    DickeVector psi = dicke_state(3, 1);
    ASSERT_EQ(evolve(ControlWaveform{{}, 0.1}, p, psi).amplitudes, psi.amplitudes);
    ASSERT_EQ(ControlSystem(p).trajectory(ControlWaveform{{}, 0.1}, psi).size(), 1u);
}

TEST(fidelity_and_gradient, no_microwave_no_gradient) {
    std::mt19937_64 rng(4);
    SystemParams p = random_params(3, rng);
    p.omega_uw = 0;
    FidelityGradient fg =
        fidelity_and_gradient(random_waveform(6, 0.1, rng), p, dicke_state(3, 0), random_state(3, rng));
    for (double g : fg.gradient) {
        ASSERT_EQ(g, 0);
    }
}

TEST(fidelity_and_gradient, matches_central_differences) {
    std::mt19937_64 rng(99);
    const double h = 1e-6;
    double worst = 0;
    for (int trial = 0; trial < 50; trial++) {
        SystemParams p = random_params(4, rng);
        ControlWaveform w = random_waveform(4 + trial % 13, 0.02 + 0.005 * (trial % 11), rng);
        DickeVector psi0 = trial % 2 ? dicke_state(4, 0) : random_state(4, rng);
        DickeVector target = random_state(4, rng);
        FidelityGradient fg = fidelity_and_gradient(w, p, psi0, target);
        ASSERT_NEAR(fg.fidelity, fidelity(target, evolve(w, p, psi0)), 1e-13);
        for (size_t k = 0; k < w.steps(); k++) {
            ControlWaveform plus = w;
            ControlWaveform minus = w;
            plus.phases[k] += h;
            minus.phases[k] -= h;
            double fd = (fidelity(target, evolve(plus, p, psi0)) - fidelity(target, evolve(minus, p, psi0))) / (2 * h);
            worst = std::max(worst, std::abs(fd - fg.gradient[k]));
        }
    }
    ASSERT_LT(worst, 1e-6);
}

TEST(fidelity_and_gradient, handles_degenerate_spectra) {
    // Omega_r = 0 and Delta_uw = 0 leave degenerate control eigenvalues across the two manifolds.
    SystemParams p{3, 0, 0, 5.0, 0};
    std::mt19937_64 rng(12);
    ControlWaveform w = random_waveform(5, 0.3, rng);
    DickeVector psi0 = random_state(3, rng);
    DickeVector target = random_state(3, rng);
    FidelityGradient fg = fidelity_and_gradient(w, p, psi0, target);
    const double h = 1e-6;
    for (size_t k = 0; k < w.steps(); k++) {
        ControlWaveform plus = w;
        ControlWaveform minus = w;
        plus.phases[k] += h;
        minus.phases[k] -= h;
        double fd = (fidelity(target, evolve(plus, p, psi0)) - fidelity(target, evolve(minus, p, psi0))) / (2 * h);
        ASSERT_NEAR(fd, fg.gradient[k], 1e-7);
    }
}
