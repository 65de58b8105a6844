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

#ifndef RYDBERG_SYMMETRIC_HILBERT_H
#define RYDBERG_SYMMETRIC_HILBERT_H

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

namespace rydberg {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// The two Jaynes-Cummings manifolds of a blockaded ensemble: no Rydberg atom, or exactly one.
enum class Manifold { Ground, Excited };

/// Names one symmetric basis state |g,n> or |e,n>, where n counts atoms in |1>.
struct BasisLabel {
    Manifold manifold = Manifold::Ground;
    int n = 0;

    bool operator==(const BasisLabel &other) const = default;
};

/// Dimension of the symmetric space: N+1 ground states plus N excited states.
inline int basis_size(int n_atoms) {
    return 2 * n_atoms + 1;
}

/// Position of a label in the amplitude vector. Ground block first, then excited, ascending n.
///
/// Throws std::invalid_argument when n_atoms < 1 or the excitation count is out of range.
int basis_index(BasisLabel label, int n_atoms);

/// Inverse of basis_index.
BasisLabel basis_label(int index, int n_atoms);

/// Pure state on the symmetric space of n_atoms atoms, ordered [g:0..N, e:0..N-1].
struct DickeVector {
    CVector amplitudes;
    int n_atoms = 0;

    DickeVector() = default;
    /// Checks that the amplitude count matches 2N+1.
    DickeVector(CVector amplitudes, int n_atoms);

    Complex operator[](BasisLabel label) const {
        return amplitudes[basis_index(label, n_atoms)];
    }
    double norm() const {
        return amplitudes.norm();
    }
    /// Probability mass on the excited (one Rydberg atom) block.
    double excited_population() const;
};

/// |g,n>, the symmetric state with n of N atoms in |1>.
DickeVector dicke_state(int n_atoms, int n);

/// Product state (cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>)^{(x) N} expressed in the ground block.
DickeVector spin_coherent_state(int n_atoms, double theta, double phi);

/// (|g,0> + e^{i relative_phase}|g,N>)/sqrt(2).
DickeVector cat_state(int n_atoms, double relative_phase);

enum class Axis { X, Y, Z };

/// Collective spin component acting on both manifolds.
///
/// The ground block is the spin-N/2 representation on n = 0..N and the excited block is the
/// spin-(N-1)/2 representation on n = 0..N-1, with J_z = n - J on each block.
CMatrix collective_spin(int n_atoms, Axis axis);

/// |<a|b>|^2. Throws std::invalid_argument when the atom counts differ.
double fidelity(const DickeVector &a, const DickeVector &b);

/// <a|b>. Same preconditions as fidelity.
Complex overlap(const DickeVector &a, const DickeVector &b);

/// Binomial coefficient as a double, exact for the sizes used here.
double binomial(int n, int k);

}  // namespace rydberg

#endif
