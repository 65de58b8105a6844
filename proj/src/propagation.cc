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

#include <cmath>
#include <string>

namespace rydberg {

void ControlWaveform::validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw std::invalid_argument("waveform step duration must be positive");
    }
    for (double p : phases) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("waveform phases must be finite");
        }
    }
}

namespace {

using Eigen::VectorXd;

void check_hermitian(const CMatrix &h) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("Hamiltonian must be square");
    }
    double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
        throw std::invalid_argument("Hamiltonian is not Hermitian (asymmetry " + std::to_string(asym) + ")");
    }
}

CVector phase_factors(const VectorXd &energies, double dt) {
    CVector out(energies.size());
    for (Eigen::Index k = 0; k < energies.size(); k++) {
        out[k] = std::polar(1.0, -energies[k] * dt);
    }
    return out;
}

// (e^{-i a dt} - e^{-i b dt}) / (a - b), continuous through a == b.
Complex divided_difference(double a, double b, double dt) {
    double half = (a - b) * dt / 2;
    double sinc = std::abs(half) < 1e-8 ? 1 - half * half / 6 : std::sin(half) / half;
    return Complex(0, -dt) * std::polar(1.0, -(a + b) * dt / 2) * sinc;
}

}  // namespace

CMatrix step_propagator(const CMatrix &hamiltonian, double dt) {
    check_hermitian(hamiltonian);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian);
    const CMatrix &v = solver.eigenvectors();
    return v * phase_factors(solver.eigenvalues(), dt).asDiagonal() * v.adjoint();
}

ControlSystem::ControlSystem(const SystemParams &params)
    : params_(params),
      drift_(build_drift(params)),
      jx_(collective_spin(params.n_atoms, Axis::X)),
      jy_(collective_spin(params.n_atoms, Axis::Y)) {
}

CMatrix ControlSystem::hamiltonian(double phase) const {
    double amp = params_.omega_uw / 2;
    return drift_ + (amp * std::cos(phase)) * jx_ + (amp * std::sin(phase)) * jy_;
}

CMatrix ControlSystem::hamiltonian_derivative(double phase) const {
    double amp = params_.omega_uw / 2;
    return (-amp * std::sin(phase)) * jx_ + (amp * std::cos(phase)) * jy_;
}

void ControlSystem::check_state(const DickeVector &state) const {
    if (state.n_atoms != params_.n_atoms || state.amplitudes.size() != dimension()) {
        throw std::invalid_argument("state has " + std::to_string(state.n_atoms) + " atoms but the system has " +
                                    std::to_string(params_.n_atoms));
    }
}

std::vector<DickeVector> ControlSystem::trajectory(const ControlWaveform &waveform, const DickeVector &psi0) const {
    waveform.validate();
    check_state(psi0);
    std::vector<DickeVector> states;
    states.reserve(waveform.steps() + 1);
    states.push_back(psi0);
    CVector psi = psi0.amplitudes;
    for (double phase : waveform.phases) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian(phase));
        const CMatrix &v = solver.eigenvectors();
        CVector rotated = v.adjoint() * psi;
        psi = v * phase_factors(solver.eigenvalues(), waveform.dt).cwiseProduct(rotated);
        states.emplace_back(psi, params_.n_atoms);
    }
    return states;
}

DickeVector ControlSystem::evolve(const ControlWaveform &waveform, const DickeVector &psi0) const {
    waveform.validate();
    check_state(psi0);
    CVector psi = psi0.amplitudes;
    for (double phase : waveform.phases) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian(phase));
        const CMatrix &v = solver.eigenvectors();
        CVector rotated = v.adjoint() * psi;
        psi = v * phase_factors(solver.eigenvalues(), waveform.dt).cwiseProduct(rotated);
    }
    return {std::move(psi), params_.n_atoms};
}

double ControlSystem::transfer_fidelity(const ControlWaveform &waveform, const DickeVector &psi0,
                                        const DickeVector &target) const {
    check_state(target);
    return fidelity(target, evolve(waveform, psi0));
}

double ControlSystem::fidelity_and_gradient(std::span<const double> phases, double dt, const DickeVector &psi0,
                                            const DickeVector &target, std::span<double> gradient) const {
    check_state(psi0);
    check_state(target);
    if (phases.empty() || !(dt > 0)) {
        throw std::invalid_argument("waveform needs at least one step and a positive dt");
    }
    if (gradient.size() != phases.size()) {
        throw std::invalid_argument("gradient buffer length differs from the number of phase steps");
    }
    size_t steps = phases.size();
    int d = dimension();

    std::vector<CMatrix> vectors(steps);
    std::vector<VectorXd> energies(steps);
    std::vector<CVector> before(steps);
    CVector psi = psi0.amplitudes;
    for (size_t k = 0; k < steps; k++) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian(phases[k]));
        vectors[k] = solver.eigenvectors();
        energies[k] = solver.eigenvalues();
        before[k] = psi;
        CVector rotated = vectors[k].adjoint() * psi;
        psi = vectors[k] * phase_factors(energies[k], dt).cwiseProduct(rotated);
    }
    Complex amplitude = target.amplitudes.dot(psi);

    CVector costate = target.amplitudes;
    CMatrix weights(d, d);
    for (size_t k = steps; k-- > 0;) {
        const CMatrix &v = vectors[k];
        const VectorXd &w = energies[k];
        CVector x = v.adjoint() * before[k];
        CVector y = v.adjoint() * costate;
        CMatrix m = v.adjoint() * hamiltonian_derivative(phases[k]) * v;
        for (int a = 0; a < d; a++) {
            for (int b = 0; b < d; b++) {
                weights(a, b) = divided_difference(w[a], w[b], dt);
            }
        }
        Complex d_amplitude = y.dot(weights.cwiseProduct(m) * x);
        gradient[k] = 2 * std::real(std::conj(amplitude) * d_amplitude);
        costate = v * phase_factors(w, dt).conjugate().cwiseProduct(y);
    }
    return std::norm(amplitude);
}

DickeVector evolve(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &psi0) {
    return ControlSystem(params).evolve(waveform, psi0);
}

FidelityGradient fidelity_and_gradient(const ControlWaveform &waveform, const SystemParams &params,
                                       const DickeVector &psi0, const DickeVector &target) {
    waveform.validate();
    FidelityGradient out;
    out.gradient.assign(waveform.steps(), 0);
    out.fidelity = ControlSystem(params).fidelity_and_gradient(waveform.phases, waveform.dt, psi0, target, out.gradient);
    return out;
}

}  // namespace rydberg
