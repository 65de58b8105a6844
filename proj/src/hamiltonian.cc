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

#include "rydberg/hamiltonian.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rydberg {

void SystemParams::validate() const {
    if (n_atoms < 1) {
        throw std::invalid_argument("n_atoms must be at least 1");
    }
    if (!std::isfinite(omega_r) || !std::isfinite(delta_r) || !std::isfinite(omega_uw) || !std::isfinite(delta_uw)) {
        throw std::invalid_argument("system frequencies must be finite");
    }
    if (omega_r < 0) {
        throw std::invalid_argument("omega_r must be non-negative");
    }
}

CMatrix build_drift(const SystemParams &params) {
    params.validate();
    int n_atoms = params.n_atoms;
    int d = params.dimension();
    CMatrix h = CMatrix::Zero(d, d);
    for (int n = 0; n <= n_atoms; n++) {
        h(n, n) = n * params.delta_uw;
    }
    for (int n = 0; n < n_atoms; n++) {
        int e = basis_index({Manifold::Excited, n}, n_atoms);
        h(e, e) = (n + 1) * params.delta_uw - params.delta_r;
    }
    for (int n = 1; n <= n_atoms; n++) {
        int g = basis_index({Manifold::Ground, n}, n_atoms);
        int e = basis_index({Manifold::Excited, n - 1}, n_atoms);
        double coupling = std::sqrt(double(n)) * params.omega_r / 2;
        h(g, e) = coupling;
        h(e, g) = coupling;
    }
    return h;
}

CMatrix build_control(const SystemParams &params, double phase) {
    params.validate();
    return (params.omega_uw / 2) * (std::cos(phase) * collective_spin(params.n_atoms, Axis::X) +
                                    std::sin(phase) * collective_spin(params.n_atoms, Axis::Y));
}

CMatrix build_control_derivative(const SystemParams &params, double phase) {
    params.validate();
    return (params.omega_uw / 2) * (-std::sin(phase) * collective_spin(params.n_atoms, Axis::X) +
                                    std::cos(phase) * collective_spin(params.n_atoms, Axis::Y));
}

DickeVector DressedBasis::to_dressed(const DickeVector &bare) const {
    if (bare.n_atoms != n_atoms) {
        throw std::invalid_argument("state and dressed basis disagree on atom count");
    }
    return {transform.adjoint() * bare.amplitudes, n_atoms};
}

DickeVector DressedBasis::to_bare(const DickeVector &dressed) const {
    if (dressed.n_atoms != n_atoms) {
        throw std::invalid_argument("state and dressed basis disagree on atom count");
    }
    return {transform * dressed.amplitudes, n_atoms};
}

namespace {

// Bare indices sharing one excitation number: {g,0}, then {g,n, e,n-1}.
std::vector<std::vector<int>> excitation_blocks(int n_atoms) {
    std::vector<std::vector<int>> blocks;
    blocks.push_back({basis_index({Manifold::Ground, 0}, n_atoms)});
    for (int n = 1; n <= n_atoms; n++) {
        blocks.push_back(
            {basis_index({Manifold::Ground, n}, n_atoms), basis_index({Manifold::Excited, n - 1}, n_atoms)});
    }
    return blocks;
}

}  // namespace

DressedBasis dressed_basis(const SystemParams &params) {
    CMatrix drift = build_drift(params);
    int n_atoms = params.n_atoms;
    int d = params.dimension();

    DressedBasis result;
    result.n_atoms = n_atoms;
    result.transform = CMatrix::Zero(d, d);
    result.energies = Eigen::VectorXd::Zero(d);
    for (int j = 0; j < d; j++) {
        result.labels.push_back(basis_label(j, n_atoms));
    }

    for (const auto &block : excitation_blocks(n_atoms)) {
        int m = int(block.size());
        CMatrix sub(m, m);
        for (int a = 0; a < m; a++) {
            for (int b = 0; b < m; b++) {
                sub(a, b) = drift(block[a], block[b]);
            }
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(sub);
        const CMatrix &vecs = solver.eigenvectors();
        std::vector<bool> taken(m, false);
        // Eigenvalues arrive in ascending order, which is the tie-break order.
        for (int k = 0; k < m; k++) {
            int best = -1;
            double best_overlap = -1;
            double runner_up = -1;
            for (int a = 0; a < m; a++) {
                if (taken[a]) {
                    continue;
                }
                double o = std::abs(vecs(a, k));
                if (o > best_overlap) {
                    runner_up = best_overlap;
                    best_overlap = o;
                    best = a;
                } else if (o > runner_up) {
                    runner_up = o;
                }
            }
            if (runner_up >= 0 && best_overlap - runner_up < 1e-9 && best_overlap < M_SQRT1_2 + 1e-9) {
                throw LabelingAmbiguity("dressed eigenvector with energy " + std::to_string(solver.eigenvalues()[k]) +
                                        " overlaps two bare states equally; the dressed labels are undefined");
            }
            taken[best] = true;
            CVector col = vecs.col(k);
            Eigen::Index peak;
            col.cwiseAbs().maxCoeff(&peak);
            col *= std::conj(col[peak]) / std::abs(col[peak]);
            col[peak] = std::abs(col[peak]);
            int target = block[best];
            for (int a = 0; a < m; a++) {
                result.transform(block[a], target) = col[a];
            }
            result.energies[target] = solver.eigenvalues()[k];
        }
    }
    return result;
}

double kappa_exact(const SystemParams &params) {
    if (params.n_atoms < 2) {
        throw std::invalid_argument("kappa needs at least two atoms");
    }
    SystemParams resonant = params;
    resonant.delta_uw = 0;
    DressedBasis basis = dressed_basis(resonant);
    return basis.energy({Manifold::Ground, 2}) - 2 * basis.energy({Manifold::Ground, 1}) +
           basis.energy({Manifold::Ground, 0});
}

double kappa_weak(const SystemParams &params) {
    if (params.delta_r == 0) {
        throw SingularityError("weak-dressing kappa diverges at delta_r = 0");
    }
    double o2 = params.omega_r * params.omega_r;
    return -o2 * o2 / (8 * params.delta_r * params.delta_r * params.delta_r);
}

double blockade_radius(double c6_over_h_ghz_um6, double omega_r) {
    if (!(omega_r > 0)) {
        throw std::invalid_argument("blockade radius needs a positive Rabi frequency");
    }
    if (c6_over_h_ghz_um6 == 0) {
        throw std::invalid_argument("blockade radius needs a nonzero C6");
    }
    // GHz -> rad/us.
    double c6_angular = 2 * M_PI * 1e3 * std::abs(c6_over_h_ghz_um6);
    return std::pow(c6_angular / omega_r, 1.0 / 6.0);
}

double adiabaticity_parameter(const SystemParams &params) {
    if (params.delta_r == 0) {
        throw SingularityError("adiabaticity parameter diverges at delta_r = 0");
    }
    double dr = std::abs(params.delta_r);
    return std::sqrt(double(params.n_atoms)) * params.omega_r * params.omega_uw * params.omega_uw / (dr * dr * dr);
}

DickeVector dressed_target(const SystemParams &params, const CVector &coeffs) {
    params.validate();
    if (coeffs.size() != params.n_atoms + 1) {
        throw std::invalid_argument("target needs " + std::to_string(params.n_atoms + 1) + " ground coefficients, got " +
                                    std::to_string(coeffs.size()));
    }
    if (std::abs(coeffs.norm() - 1) > 1e-9) {
        throw std::invalid_argument("target coefficients are not normalized (norm " + std::to_string(coeffs.norm()) + ")");
    }
    DressedBasis basis = dressed_basis(params);
    CVector amps = basis.transform.leftCols(params.n_atoms + 1) * coeffs;
    return {std::move(amps), params.n_atoms};
}

}  // namespace rydberg
