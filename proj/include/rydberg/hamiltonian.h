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

#ifndef RYDBERG_HAMILTONIAN_H
#define RYDBERG_HAMILTONIAN_H

#include <stdexcept>
#include <vector>

#include "rydberg/symmetric_hilbert.h"

namespace rydberg {

/// Converts an ordinary frequency in MHz to an angular frequency in rad/us.
inline double mhz_to_angular(double mhz) {
    return 2 * M_PI * mhz;
}
inline double angular_to_mhz(double angular) {
    return angular / (2 * M_PI);
}

/// Physical constants of one control problem. All frequencies are angular, in rad/us.
///
/// Rotating-frame convention: a bare state with k atoms in |1> (counting the Rydberg atom of an
/// excited state as one excitation) sits at energy k * delta_uw, and the Rydberg atom adds
/// -delta_r. So |g,n> has energy n*delta_uw and |e,n> has (n+1)*delta_uw - delta_r.
struct SystemParams {
    int n_atoms = 1;
    double omega_r = 0;   // Rydberg laser Rabi frequency.
    double delta_r = 0;   // Rydberg laser detuning.
    double omega_uw = 0;  // Microwave Rabi frequency.
    double delta_uw = 0;  // Microwave detuning.

    /// Throws std::invalid_argument unless n_atoms >= 1, omega_r >= 0 and all values are finite.
    void validate() const;
    int dimension() const {
        return basis_size(n_atoms);
    }

    bool operator==(const SystemParams &other) const = default;
};

/// Raised for parameter points where a closed-form quantity diverges (zero detuning, zero kappa).
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when two bare labels match a dressed eigenvector equally well.
struct LabelingAmbiguity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Laser-dressed Jaynes-Cummings drift: detunings on the diagonal plus sqrt(n) * omega_r / 2
/// couplings between |g,n> and |e,n-1>.
CMatrix build_drift(const SystemParams &params);

/// (omega_uw / 2) (cos(phase) J_x + sin(phase) J_y).
CMatrix build_control(const SystemParams &params, double phase);

/// d/dphase of build_control.
CMatrix build_control_derivative(const SystemParams &params, double phase);

/// Eigenbasis of the drift. Column j of `transform` is the dressed state adiabatically connected
/// to the bare state basis_label(j), so `labels[j] == basis_label(j)` and dressed amplitudes of a
/// state share the bare ordering.
struct DressedBasis {
    CMatrix transform;
    Eigen::VectorXd energies;
    std::vector<BasisLabel> labels;
    int n_atoms = 0;

    CVector column(BasisLabel label) const {
        return transform.col(basis_index(label, n_atoms));
    }
    double energy(BasisLabel label) const {
        return energies[basis_index(label, n_atoms)];
    }
    /// Amplitudes of a bare-basis state on the dressed states.
    DickeVector to_dressed(const DickeVector &bare) const;
    DickeVector to_bare(const DickeVector &dressed) const;
};

/// Diagonalizes the drift block by block (each block has fixed excitation number) and labels
/// each eigenvector by its largest bare component. Ties go to the lower-energy eigenvector first;
/// an exact tie below 1/sqrt(2) raises LabelingAmbiguity. Column phases make the largest
/// component real and positive.
DressedBasis dressed_basis(const SystemParams &params);

/// Nonlinear shift E(g~,2) - 2 E(g~,1) + E(g~,0) of the dressed ground ladder at zero microwave
/// detuning. Requires n_atoms >= 2.
double kappa_exact(const SystemParams &params);

/// Weak-dressing estimate -omega_r^4 / (8 delta_r^3). Throws SingularityError at delta_r = 0.
double kappa_weak(const SystemParams &params);

/// Blockade radius (|C6/hbar| / omega_r)^(1/6) in um, for C6/h given in GHz um^6 and omega_r in
/// rad/us.
double blockade_radius(double c6_over_h_ghz_um6, double omega_r);

/// sqrt(N) omega_r omega_uw^2 / |delta_r|^3. Dressed-ground control needs this to be small.
double adiabaticity_parameter(const SystemParams &params);

/// Sum_n coeffs[n] |g~,n>. Throws std::invalid_argument unless coeffs has N+1 entries with unit
/// norm to within 1e-9.
DickeVector dressed_target(const SystemParams &params, const CVector &coeffs);

}  // namespace rydberg

#endif
