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

#include "rydberg/symmetric_hilbert.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rydberg {

namespace {

void require_atoms(int n_atoms) {
    if (n_atoms < 1) {
        throw std::invalid_argument("n_atoms must be at least 1, got " + std::to_string(n_atoms));
    }
}

}  // namespace

int basis_index(BasisLabel label, int n_atoms) {
    require_atoms(n_atoms);
    if (label.manifold == Manifold::Ground) {
        if (label.n < 0 || label.n > n_atoms) {
            throw std::invalid_argument("ground excitation count " + std::to_string(label.n) + " out of range for N=" +
                                        std::to_string(n_atoms));
        }
        return label.n;
    }
    if (label.n < 0 || label.n > n_atoms - 1) {
        throw std::invalid_argument("excited excitation count " + std::to_string(label.n) + " out of range for N=" +
                                    std::to_string(n_atoms));
    }
    return n_atoms + 1 + label.n;
}

BasisLabel basis_label(int index, int n_atoms) {
    require_atoms(n_atoms);
    if (index < 0 || index >= basis_size(n_atoms)) {
        throw std::invalid_argument("basis index " + std::to_string(index) + " out of range");
    }
    if (index <= n_atoms) {
        return {Manifold::Ground, index};
    }
    return {Manifold::Excited, index - n_atoms - 1};
}

DickeVector::DickeVector(CVector amplitudes_, int n_atoms_) : amplitudes(std::move(amplitudes_)), n_atoms(n_atoms_) {
    require_atoms(n_atoms);
    if (amplitudes.size() != basis_size(n_atoms)) {
        throw std::invalid_argument("amplitude vector has length " + std::to_string(amplitudes.size()) +
                                    ", expected " + std::to_string(basis_size(n_atoms)));
    }
}

double DickeVector::excited_population() const {
    return amplitudes.tail(n_atoms).squaredNorm();
}

double binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    double result = 1;
    for (int j = 1; j <= k; j++) {
        result = result * (n - k + j) / j;
    }
    return std::round(result);
}

DickeVector dicke_state(int n_atoms, int n) {
    require_atoms(n_atoms);
    CVector amps = CVector::Zero(basis_size(n_atoms));
    amps[basis_index({Manifold::Ground, n}, n_atoms)] = 1;
    return {std::move(amps), n_atoms};
}

DickeVector spin_coherent_state(int n_atoms, double theta, double phi) {
    require_atoms(n_atoms);
    CVector amps = CVector::Zero(basis_size(n_atoms));
    double c = std::cos(theta / 2);
    Complex s = std::polar(1.0, phi) * std::sin(theta / 2);
    for (int n = 0; n <= n_atoms; n++) {
        Complex term = std::sqrt(binomial(n_atoms, n));
        for (int k = 0; k < n_atoms - n; k++) {
            term *= c;
        }
        for (int k = 0; k < n; k++) {
            term *= s;
        }
        amps[n] = term;
    }
    return {std::move(amps), n_atoms};
}

DickeVector cat_state(int n_atoms, double relative_phase) {
    require_atoms(n_atoms);
    CVector amps = CVector::Zero(basis_size(n_atoms));
    amps[0] = M_SQRT1_2;
    amps[n_atoms] = std::polar(M_SQRT1_2, relative_phase);
    return {std::move(amps), n_atoms};
}

CMatrix collective_spin(int n_atoms, Axis axis) {
    require_atoms(n_atoms);
    int d = basis_size(n_atoms);
    CMatrix raise = CMatrix::Zero(d, d);
    CMatrix result = CMatrix::Zero(d, d);
    for (int n = 0; n < n_atoms; n++) {
        raise(n + 1, n) = std::sqrt(double((n + 1) * (n_atoms - n)));
    }
    for (int n = 0; n + 1 < n_atoms; n++) {
        raise(n_atoms + 2 + n, n_atoms + 1 + n) = std::sqrt(double((n + 1) * (n_atoms - 1 - n)));
    }
    switch (axis) {
        case Axis::X:
            result = (raise + raise.adjoint()) / 2.0;
            break;
        case Axis::Y:
            result = (raise - raise.adjoint()) / Complex(0, 2);
            break;
        case Axis::Z:
            for (int n = 0; n <= n_atoms; n++) {
                result(n, n) = n - n_atoms / 2.0;
            }
            for (int n = 0; n < n_atoms; n++) {
                result(n_atoms + 1 + n, n_atoms + 1 + n) = n - (n_atoms - 1) / 2.0;
            }
            break;
    }
    return result;
}

Complex overlap(const DickeVector &a, const DickeVector &b) {
    if (a.n_atoms != b.n_atoms || a.amplitudes.size() != b.amplitudes.size()) {
        throw std::invalid_argument("overlap between states of " + std::to_string(a.n_atoms) + " and " +
                                    std::to_string(b.n_atoms) + " atoms");
    }
    return a.amplitudes.dot(b.amplitudes);
}

double fidelity(const DickeVector &a, const DickeVector &b) {
    return std::norm(overlap(a, b));
}

}  // namespace rydberg
