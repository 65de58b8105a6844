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

#ifndef RYDBERG_VERIFICATION_H
#define RYDBERG_VERIFICATION_H

#include <vector>

#include "rydberg/propagation.h"

namespace rydberg {

struct LieClosureReport {
    int dimension_found = 0;
    int dimension_full = 0;  // d^2 - 1
    int depth_reached = 0;   // commutator generations formed
    bool is_controllable = false;
};

/// Dimension of the real Lie algebra generated by {i H_k} inside su(d).
///
/// Seeds with the traceless parts of i*H_k, then brackets each new element against the current
/// basis, generation by generation, keeping commutators whose Gram-Schmidt residual exceeds 1e-9
/// of their norm. Stops when a generation adds nothing or the algebra fills su(d).
/// Throws std::invalid_argument for an empty list, mismatched sizes or non-Hermitian input.
LieClosureReport lie_closure_dimension(const std::vector<CMatrix> &generators);

/// Largest atom count the tensor-product oracle accepts (3^N amplitudes).
constexpr int kMaxFullSpaceAtoms = 4;

/// Columns are |g,0..N>, |e,0..N-1> written out as symmetric 3^N product-state sums. Atom
/// levels are encoded base 3 with digit 0 = |0>, 1 = |1>, 2 = |r>; atom 0 is the least
/// significant digit.
CMatrix symmetric_embedding(int n_atoms);

/// Sum of single-atom Hamiltonians (microwave on |0>-|1> at `phase`, laser on |1>-|r>, frame
/// detunings), projected onto product states with at most one Rydberg atom.
CMatrix full_space_hamiltonian(const SystemParams &params, double phase);

struct FullSpaceRun {
    DickeVector state;
    CVector full_state;
    /// Largest population ever found in states with two or more Rydberg atoms.
    double multi_rydberg_population = 0;
    /// Norm of the final state's component outside the symmetric embedding.
    double symmetry_residual = 0;
};

/// Evolves N three-level atoms in the full 3^N space under a perfect blockade and projects the
/// result onto the symmetric basis. Throws std::invalid_argument for N > kMaxFullSpaceAtoms or a
/// non-symmetric initial state, std::runtime_error if the result leaves the symmetric subspace.
FullSpaceRun full_space_run(const ControlWaveform &waveform, const SystemParams &params, const CVector &initial);

FullSpaceRun full_space_run(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &initial);

DickeVector full_space_evolve(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &initial);

/// exp(-i (kappa T / 2) J_z^2) on a ground-manifold state. Linear J_z terms are left out, so
/// compare results with max_fidelity_modulo_z_rotation.
/// Throws std::invalid_argument if psi0 has excited-manifold amplitude above 1e-12.
DickeVector oat_evolve(int n_atoms, double kappa, double duration, const DickeVector &psi0);

struct RotationMatch {
    double fidelity = 0;
    double angle = 0;
};

/// max over theta of |<reference| exp(-i theta N_exc) |state>|^2, where N_exc counts |1>
/// excitations (n on |g,n>, n+1 on |e,n>).
RotationMatch max_fidelity_modulo_z_rotation(const DickeVector &reference, const DickeVector &state);

/// (|+x>^N + e^{i relative_phase} |-x>^N)/sqrt(2): the cat state along the x axis.
DickeVector x_cat_state(int n_atoms, double relative_phase);

}  // namespace rydberg

#endif
