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

#ifndef RYDBERG_PROPAGATION_H
#define RYDBERG_PROPAGATION_H

#include <span>
#include <vector>

#include "rydberg/hamiltonian.h"

namespace rydberg {

/// Piecewise-constant microwave phase sequence. Total run time is phases.size() * dt.
struct ControlWaveform {
    std::vector<double> phases;
    double dt = 0;  // us

    size_t steps() const {
        return phases.size();
    }
    double duration() const {
        return dt * double(phases.size());
    }
    /// Throws std::invalid_argument unless dt > 0 and every phase is finite. Zero steps is the identity.
    void validate() const;

    bool operator==(const ControlWaveform &other) const = default;
};

/// exp(-i H dt) from the Hermitian eigendecomposition of H.
///
/// Throws std::invalid_argument if H is not square or deviates from Hermitian by more than 1e-9.
CMatrix step_propagator(const CMatrix &hamiltonian, double dt);

/// Precomputed drift and control operators for repeated evaluation at fixed SystemParams.
class ControlSystem {
   public:
    explicit ControlSystem(const SystemParams &params);

    const SystemParams &params() const {
        return params_;
    }
    int dimension() const {
        return params_.dimension();
    }
    CMatrix hamiltonian(double phase) const;
    CMatrix hamiltonian_derivative(double phase) const;

    /// Applies U_s ... U_1 to psi0.
    DickeVector evolve(const ControlWaveform &waveform, const DickeVector &psi0) const;

    /// States at every step boundary: psi0, U_1 psi0, ..., U_s ... U_1 psi0.
    std::vector<DickeVector> trajectory(const ControlWaveform &waveform, const DickeVector &psi0) const;

    double transfer_fidelity(const ControlWaveform &waveform, const DickeVector &psi0, const DickeVector &target) const;

    /// Fills `gradient` (length s) with dF/dphi_k and returns F = |<target|U psi0>|^2.
    double fidelity_and_gradient(std::span<const double> phases, double dt, const DickeVector &psi0,
                                 const DickeVector &target, std::span<double> gradient) const;

   private:
    void check_state(const DickeVector &state) const;

    SystemParams params_;
    CMatrix drift_;
    CMatrix jx_;
    CMatrix jy_;
};

DickeVector evolve(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &psi0);

struct FidelityGradient {
    double fidelity = 0;
    std::vector<double> gradient;
};

/// Transfer fidelity and its exact gradient with respect to every phase.
///
/// Each step derivative uses the divided-difference form of d exp(-i H dt) in the eigenbasis of
/// H, contracted between the forward-propagated state and the backward-propagated target.
FidelityGradient fidelity_and_gradient(const ControlWaveform &waveform, const SystemParams &params,
                                       const DickeVector &psi0, const DickeVector &target);

}  // namespace rydberg

#endif
