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

#include "rydberg/verification.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydberg {

namespace {

using Eigen::VectorXd;

VectorXd flatten(const CMatrix &m) {
    Eigen::Index n = m.size();
    VectorXd out(2 * n);
    for (Eigen::Index k = 0; k < n; k++) {
        out[2 * k] = m.data()[k].real();
        out[2 * k + 1] = m.data()[k].imag();
    }
    return out;
}

class OrthonormalSpan {
   public:
    explicit OrthonormalSpan(double tolerance) : tolerance_(tolerance) {
    }

    // Adds the direction of `candidate` if it is independent of the span. Returns whether it did.
    bool add(const CMatrix &candidate) {
        double norm = candidate.norm();
        if (!(norm > 1e-300)) {
            return false;
        }
        VectorXd v = flatten(candidate) / norm;
        // Two passes of modified Gram-Schmidt.
        for (int pass = 0; pass < 2; pass++) {
            for (const VectorXd &q : vectors_) {
                v -= q.dot(v) * q;
            }
        }
        double residual = v.norm();
        if (residual <= tolerance_) {
            return false;
        }
        vectors_.push_back(v / residual);
        return true;
    }
    int size() const {
        return int(vectors_.size());
    }

   private:
    double tolerance_;
    std::vector<VectorXd> vectors_;
};

}  // namespace

LieClosureReport lie_closure_dimension(const std::vector<CMatrix> &generators) {
    if (generators.empty()) {
        throw std::invalid_argument("Lie closure needs at least one generator");
    }
    Eigen::Index d = generators[0].rows();
    for (const CMatrix &g : generators) {
        if (g.rows() != d || g.cols() != d) {
            throw std::invalid_argument("generators must all be square with the same dimension");
        }
        double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
        if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            throw std::invalid_argument("generators must be Hermitian");
        }
    }

    LieClosureReport report;
    report.dimension_full = int(d * d - 1);
    OrthonormalSpan span(1e-9);
    std::vector<CMatrix> basis;
    std::vector<CMatrix> frontier;
    CMatrix identity = CMatrix::Identity(d, d);
    for (const CMatrix &g : generators) {
        CMatrix element = Complex(0, 1) * (g - (g.trace() / double(d)) * identity);
        double norm = element.norm();
        if (norm > 0) {
            element /= norm;
        }
        if (span.add(element)) {
            basis.push_back(element);
            frontier.push_back(element);
        }
    }

    while (!frontier.empty() && span.size() < report.dimension_full) {
        report.depth_reached++;
        std::vector<CMatrix> next;
        size_t known = basis.size();
        for (const CMatrix &a : frontier) {
            for (size_t j = 0; j < known && span.size() < report.dimension_full; j++) {
                CMatrix c = a * basis[j] - basis[j] * a;
                double norm = c.norm();
                if (norm == 0) {
                    continue;
                }
                c /= norm;
                if (span.add(c)) {
                    basis.push_back(c);
                    next.push_back(c);
                }
            }
        }
        frontier = std::move(next);
    }
    report.dimension_found = span.size();
    report.is_controllable = report.dimension_found == report.dimension_full;
    return report;
}

namespace {

int pow3(int n) {
    int r = 1;
    for (int k = 0; k < n; k++) {
        r *= 3;
    }
    return r;
}

void require_small(int n_atoms) {
    if (n_atoms < 1 || n_atoms > kMaxFullSpaceAtoms) {
        throw std::invalid_argument("tensor-product oracle supports 1.." + std::to_string(kMaxFullSpaceAtoms) +
                                    " atoms, got " + std::to_string(n_atoms));
    }
}

struct LevelCounts {
    int ones = 0;
    int rydberg = 0;
};

LevelCounts count_levels(int index, int n_atoms) {
    LevelCounts c;
    for (int a = 0; a < n_atoms; a++) {
        int digit = index % 3;
        index /= 3;
        c.ones += digit == 1;
        c.rydberg += digit == 2;
    }
    return c;
}

int digit_of(int index, int atom) {
    for (int a = 0; a < atom; a++) {
        index /= 3;
    }
    return index % 3;
}

int with_digit(int index, int atom, int digit) {
    int place = pow3(atom);
    return index + (digit - digit_of(index, atom)) * place;
}

}  // namespace

CMatrix symmetric_embedding(int n_atoms) {
    require_small(n_atoms);
    int full = pow3(n_atoms);
    CMatrix out = CMatrix::Zero(full, basis_size(n_atoms));
    for (int index = 0; index < full; index++) {
        LevelCounts c = count_levels(index, n_atoms);
        if (c.rydberg == 0) {
            out(index, basis_index({Manifold::Ground, c.ones}, n_atoms)) = 1;
        } else if (c.rydberg == 1) {
            out(index, basis_index({Manifold::Excited, c.ones}, n_atoms)) = 1;
        }
    }
    for (Eigen::Index col = 0; col < out.cols(); col++) {
        out.col(col).normalize();
    }
    return out;
}

CMatrix full_space_hamiltonian(const SystemParams &params, double phase) {
    params.validate();
    int n_atoms = params.n_atoms;
    require_small(n_atoms);
    int full = pow3(n_atoms);
    CMatrix h = CMatrix::Zero(full, full);
    Complex raise_uw = std::polar(params.omega_uw / 4, -phase);
    for (int index = 0; index < full; index++) {
        for (int a = 0; a < n_atoms; a++) {
            switch (digit_of(index, a)) {
                case 0:
                    h(with_digit(index, a, 1), index) += raise_uw;
                    break;
                case 1:
                    h(index, index) += params.delta_uw;
                    h(with_digit(index, a, 0), index) += std::conj(raise_uw);
                    h(with_digit(index, a, 2), index) += params.omega_r / 2;
                    break;
                case 2:
                    h(index, index) += params.delta_uw - params.delta_r;
                    h(with_digit(index, a, 1), index) += params.omega_r / 2;
                    break;
            }
        }
    }
    for (int index = 0; index < full; index++) {
        if (count_levels(index, n_atoms).rydberg >= 2) {
            h.row(index).setZero();
            h.col(index).setZero();
        }
    }
    return h;
}

FullSpaceRun full_space_run(const ControlWaveform &waveform, const SystemParams &params, const CVector &initial) {
    params.validate();
    waveform.validate();
    int n_atoms = params.n_atoms;
    require_small(n_atoms);
    int full = pow3(n_atoms);
    if (initial.size() != full) {
        throw std::invalid_argument("initial state has " + std::to_string(initial.size()) + " amplitudes, expected " +
                                    std::to_string(full));
    }
    CMatrix embed = symmetric_embedding(n_atoms);
    double initial_residual = (initial - embed * (embed.adjoint() * initial)).norm();
    if (initial_residual > 1e-10) {
        throw std::invalid_argument("initial state is not permutation symmetric (residual " +
                                    std::to_string(initial_residual) + ")");
    }

    std::vector<int> multi;
    std::vector<int> allowed;
    for (int index = 0; index < full; index++) {
        (count_levels(index, n_atoms).rydberg >= 2 ? multi : allowed).push_back(index);
    }
    auto multi_population = [&](const CVector &psi) {
        double p = 0;
        for (int index : multi) {
            p += std::norm(psi[index]);
        }
        return p;
    };

    FullSpaceRun run;
    CVector psi = initial;
    run.multi_rydberg_population = multi_population(psi);
    // Propagate on the blockaded subspace only, so multi-Rydberg amplitudes are never touched.
    for (double phase : waveform.phases) {
        CMatrix h = full_space_hamiltonian(params, phase)(allowed, allowed);
        CVector sub = step_propagator(h, waveform.dt) * psi(allowed);
        psi(allowed) = sub;
        run.multi_rydberg_population = std::max(run.multi_rydberg_population, multi_population(psi));
    }
    CVector amps = embed.adjoint() * psi;
    run.symmetry_residual = (psi - embed * amps).norm();
    if (run.symmetry_residual > 1e-10) {
        throw std::runtime_error("full-space evolution left the symmetric subspace (residual " +
                                 std::to_string(run.symmetry_residual) + ")");
    }
    run.full_state = std::move(psi);
    run.state = DickeVector(std::move(amps), n_atoms);
    return run;
}

FullSpaceRun full_space_run(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &initial) {
    if (initial.n_atoms != params.n_atoms) {
        throw std::invalid_argument("initial state and params disagree on atom count");
    }
    require_small(params.n_atoms);
    return full_space_run(waveform, params, CVector(symmetric_embedding(params.n_atoms) * initial.amplitudes));
}

DickeVector full_space_evolve(const ControlWaveform &waveform, const SystemParams &params, const DickeVector &initial) {
    return full_space_run(waveform, params, initial).state;
}

DickeVector oat_evolve(int n_atoms, double kappa, double duration, const DickeVector &psi0) {
    if (psi0.n_atoms != n_atoms) {
        throw std::invalid_argument("state and atom count disagree");
    }
    double excited = psi0.excited_population();
    if (excited > 1e-24) {
        throw std::invalid_argument("one-axis twisting acts on the ground manifold only; excited population " +
                                    std::to_string(excited));
    }
    CVector amps = psi0.amplitudes;
    for (int n = 0; n <= n_atoms; n++) {
        double m = n - n_atoms / 2.0;
        amps[n] *= std::polar(1.0, -kappa * duration / 2 * m * m);
    }
    return {std::move(amps), n_atoms};
}

RotationMatch max_fidelity_modulo_z_rotation(const DickeVector &reference, const DickeVector &state) {
    if (reference.n_atoms != state.n_atoms) {
        throw std::invalid_argument("states disagree on atom count");
    }
    int n_atoms = state.n_atoms;
    // Overlap as a trigonometric polynomial in theta: sum_k c_k e^{-i k theta}.
    std::vector<Complex> coeff(n_atoms + 1, 0);
    for (int j = 0; j < basis_size(n_atoms); j++) {
        BasisLabel label = basis_label(j, n_atoms);
        int k = label.manifold == Manifold::Ground ? label.n : label.n + 1;
        coeff[k] += std::conj(reference.amplitudes[j]) * state.amplitudes[j];
    }
    auto value = [&](double theta) {
        Complex sum = 0;
        for (int k = 0; k <= n_atoms; k++) {
            sum += coeff[k] * std::polar(1.0, -k * theta);
        }
        return std::norm(sum);
    };

    const int grid = 4096;
    double step = 2 * M_PI / grid;
    RotationMatch best{value(0), 0};
    for (int g = 1; g < grid; g++) {
        double v = value(g * step);
        if (v > best.fidelity) {
            best = {v, g * step};
        }
    }
    // Golden-section refinement inside the neighbouring grid cells.
    double lo = best.angle - step;
    double hi = best.angle + step;
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = value(x1);
    double f2 = value(x2);
    for (int iter = 0; iter < 100; iter++) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = value(x1);
        }
    }
    double mid = (lo + hi) / 2;
    double refined = value(mid);
    if (refined > best.fidelity) {
        best = {refined, mid};
    }
    return best;
}

DickeVector x_cat_state(int n_atoms, double relative_phase) {
    DickeVector plus = spin_coherent_state(n_atoms, M_PI / 2, 0);
    DickeVector minus = spin_coherent_state(n_atoms, M_PI / 2, M_PI);
    CVector amps = (plus.amplitudes + std::polar(1.0, relative_phase) * minus.amplitudes) * M_SQRT1_2;
    return {std::move(amps), n_atoms};
}

}  // namespace rydberg
