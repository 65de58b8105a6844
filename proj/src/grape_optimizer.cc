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

#include "rydberg/grape_optimizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rydberg {

void OptimizeOptions::validate() const {
    if (steps < 0) {
        throw std::invalid_argument("steps must be positive");
    }
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (restarts < 1) {
        throw std::invalid_argument("restarts must be at least 1");
    }
    if (max_iterations < 0) {
        throw std::invalid_argument("max_iterations must be non-negative");
    }
    if (!(fidelity_goal > 0 && fidelity_goal <= 1)) {
        throw std::invalid_argument("fidelity_goal must lie in (0, 1]");
    }
    if (!(gradient_tolerance >= 0)) {
        throw std::invalid_argument("gradient_tolerance must be non-negative");
    }
    if (threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
}

uint64_t derive_seed(uint64_t base, uint64_t index) {
    // splitmix64 finalizer over the pair.
    uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double wrap_phase(double phase) {
    double wrapped = std::remainder(phase, 2 * M_PI);
    return wrapped >= M_PI ? wrapped - 2 * M_PI : wrapped;
}

struct RestartOutcome {
    std::vector<double> phases;
    double fidelity = 0;
    int iterations = 0;
    std::vector<double> trace;
    double gradient_norm = 0;
};

class Ascent {
   public:
    Ascent(const ControlSystem &system, const DickeVector &psi0, const DickeVector &target, const OptimizeOptions &opts,
           int restart)
        : system_(system), psi0_(psi0), target_(target), opts_(opts), restart_(restart) {
    }

    RestartOutcome run(std::vector<double> start) {
        size_t n = start.size();
        VectorXd x = Eigen::Map<VectorXd>(start.data(), Eigen::Index(n));
        VectorXd grad(n);
        double value = evaluate(x, &grad);
        MatrixXd inverse_hessian = MatrixXd::Identity(n, n);
        bool scaled = false;

        RestartOutcome out;
        out.trace.push_back(value);
        int iteration = 0;
        while (iteration < opts_.max_iterations && value < opts_.fidelity_goal &&
               grad.cwiseAbs().maxCoeff() >= opts_.gradient_tolerance) {
            VectorXd direction = inverse_hessian * grad;
            if (grad.dot(direction) <= 0) {
                inverse_hessian.setIdentity();
                scaled = false;
                direction = grad;
            }
            double longest = direction.cwiseAbs().maxCoeff();
            if (longest > M_PI) {
                direction *= M_PI / longest;
            }

            double slope = grad.dot(direction);
            double alpha = 1;
            VectorXd trial;
            double trial_value = value;
            bool accepted = false;
            for (int k = 0; k < 50; k++) {
                trial = x + alpha * direction;
                trial_value = evaluate(trial, nullptr);
                if (trial_value >= value + 1e-4 * alpha * slope && trial_value > value) {
                    accepted = true;
                    break;
                }
                alpha /= 2;
            }
            if (!accepted) {
                if (!inverse_hessian.isIdentity()) {
                    // Stale curvature; retry once along the raw gradient.
                    inverse_hessian.setIdentity();
                    scaled = false;
                    continue;
                }
                break;
            }

            VectorXd new_grad(n);
            evaluate(trial, &new_grad);
            // Minimization form: s = step, y = change in the gradient of -F.
            VectorXd s = trial - x;
            VectorXd y = grad - new_grad;
            double sy = s.dot(y);
            if (sy > 1e-12 * s.norm() * y.norm()) {
                if (!scaled) {
                    inverse_hessian *= sy / y.squaredNorm();
                    scaled = true;
                }
                double rho = 1 / sy;
                VectorXd hy = inverse_hessian * y;
                inverse_hessian += rho * ((1 + rho * y.dot(hy)) * (s * s.transpose()) - hy * s.transpose() -
                                          s * hy.transpose());
            }
            x = trial;
            value = trial_value;
            grad = new_grad;
            iteration++;
            out.trace.push_back(value);
        }

        out.phases.resize(n);
        for (size_t k = 0; k < n; k++) {
            out.phases[k] = wrap_phase(x[Eigen::Index(k)]);
        }
        out.fidelity = value;
        out.iterations = iteration;
        out.gradient_norm = grad.cwiseAbs().maxCoeff();
        return out;
    }

   private:
    double evaluate(const VectorXd &x, VectorXd *grad) {
        std::span<const double> phases(x.data(), size_t(x.size()));
        double value;
        if (grad != nullptr) {
            value = system_.fidelity_and_gradient(phases, opts_.dt, psi0_, target_,
                                                  std::span<double>(grad->data(), size_t(grad->size())));
        } else {
            ControlWaveform w{std::vector<double>(phases.begin(), phases.end()), opts_.dt};
            value = system_.transfer_fidelity(w, psi0_, target_);
        }
        if (!std::isfinite(value) || (grad != nullptr && !grad->allFinite())) {
            std::ostringstream msg;
            msg << "non-finite fidelity or gradient in restart " << restart_ << " (fidelity " << value << ", phases";
            for (double p : phases) {
                msg << ' ' << p;
            }
            msg << ")";
            throw std::runtime_error(msg.str());
        }
        return value;
    }

    const ControlSystem &system_;
    const DickeVector &psi0_;
    const DickeVector &target_;
    const OptimizeOptions &opts_;
    int restart_;
};

// Calls body(i) for i in [0, count) on up to `threads` workers. `skip(i)` is consulted before
// starting each index.
template <typename Body, typename Skip>
void run_indexed(int count, int threads, Body body, Skip skip) {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            int i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            if (skip(i)) {
                continue;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = count;
            }
        }
    };
    int workers = std::max(1, std::min(threads, count));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; t++) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

int default_steps(Regime regime, int n_atoms) {
    return regime == Regime::FullHilbert ? 4 * n_atoms : 2 * n_atoms;
}

OptimizationResult optimize_in_regime(const SystemParams &params, const DickeVector &psi0, const DickeVector &target,
                                      OptimizeOptions opts, Regime regime) {
    params.validate();
    if (opts.steps == 0) {
        opts.steps = default_steps(regime, params.n_atoms);
    }
    opts.validate();
    if (psi0.n_atoms != params.n_atoms || target.n_atoms != params.n_atoms) {
        throw std::invalid_argument("initial and target states must match the system's atom count");
    }
    if (std::abs(target.norm() - 1) > 1e-9 || std::abs(psi0.norm() - 1) > 1e-9) {
        throw std::invalid_argument("initial and target states must be normalized");
    }

    OptimizationResult result;
    result.regime = regime;

    double initial = fidelity(target, psi0);
    if (initial >= opts.fidelity_goal) {
        result.best_waveform = ControlWaveform{{}, opts.dt};
        result.best_fidelity = initial;
        result.fidelity_per_restart = {initial};
        result.iterations_used = {0};
        result.fidelity_traces = {{initial}};
        result.gradient_norms = {0};
        result.converged = true;
        return result;
    }

    ControlSystem system(params);
    std::vector<std::optional<RestartOutcome>> outcomes(opts.restarts);
    std::atomic<int> first_success{opts.restarts};
    run_indexed(
        opts.restarts, opts.threads,
        [&](int r) {
            std::mt19937_64 rng(derive_seed(opts.seed, uint64_t(r)));
            std::uniform_real_distribution<double> uniform(-M_PI, M_PI);
            std::vector<double> start(opts.steps);
            for (double &p : start) {
                p = uniform(rng);
            }
            Ascent ascent(system, psi0, target, opts, r);
            outcomes[r] = ascent.run(std::move(start));
            if (opts.stop_at_goal && outcomes[r]->fidelity >= opts.fidelity_goal) {
                int seen = first_success.load();
                while (r < seen && !first_success.compare_exchange_weak(seen, r)) {
                }
            }
        },
        [&](int r) { return r > first_success.load(); });

    int kept = std::min(opts.restarts, first_success.load() + 1);
    int best = -1;
    for (int r = 0; r < kept; r++) {
        const RestartOutcome &o = *outcomes[r];
        result.fidelity_per_restart.push_back(o.fidelity);
        result.iterations_used.push_back(o.iterations);
        result.fidelity_traces.push_back(o.trace);
        result.gradient_norms.push_back(o.gradient_norm);
        if (best < 0 || o.fidelity > outcomes[best]->fidelity) {
            best = r;
        }
    }
    result.best_waveform = ControlWaveform{outcomes[best]->phases, opts.dt};
    result.best_fidelity = outcomes[best]->fidelity;
    result.converged = result.best_fidelity >= opts.fidelity_goal;
    return result;
}

}  // namespace

OptimizationResult optimize(const SystemParams &params, const DickeVector &psi0, const DickeVector &target,
                            const OptimizeOptions &opts) {
    return optimize_in_regime(params, psi0, target, opts, Regime::FullHilbert);
}

LeakageReport measure_leakage(const SystemParams &params, const ControlWaveform &waveform, const DickeVector &psi0,
                              int samples_per_step) {
    DressedBasis basis = dressed_basis(params);
    ControlSystem system(params);
    LeakageReport report;
    CVector psi = psi0.amplitudes;
    auto excited = [&](const CVector &state) {
        return (basis.transform.rightCols(params.n_atoms).adjoint() * state).squaredNorm();
    };
    report.peak = excited(psi);
    int samples = std::max(1, samples_per_step);
    for (double phase : waveform.phases) {
        Eigen::SelfAdjointEigenSolver<CMatrix> solver(system.hamiltonian(phase));
        const CMatrix &v = solver.eigenvectors();
        CVector rotated = v.adjoint() * psi;
        for (int k = 1; k <= samples; k++) {
            double t = waveform.dt * k / samples;
            CVector phases(rotated.size());
            for (Eigen::Index a = 0; a < rotated.size(); a++) {
                phases[a] = std::polar(1.0, -solver.eigenvalues()[a] * t);
            }
            CVector state = v * phases.cwiseProduct(rotated);
            report.peak = std::max(report.peak, excited(state));
            if (k == samples) {
                psi = state;
            }
        }
    }
    report.final = excited(psi);
    return report;
}

OptimizationResult optimize_dressed_ground(const SystemParams &params, const DickeVector &psi0, const CVector &coeffs,
                                           const OptimizeOptions &opts) {
    DickeVector target = dressed_target(params, coeffs);
    std::vector<std::string> warnings;
    if (params.delta_r != 0) {
        double eta = adiabaticity_parameter(params);
        if (eta > opts.adiabaticity_warning) {
            std::ostringstream msg;
            msg << "adiabaticity parameter " << eta << " exceeds " << opts.adiabaticity_warning
                << "; dressed-excited leakage may be significant";
            warnings.push_back(msg.str());
        }
    } else {
        warnings.push_back("delta_r = 0: no dressed-ground regime exists");
    }
    OptimizationResult result = optimize_in_regime(params, psi0, target, opts, Regime::DressedGround);
    result.warnings = std::move(warnings);
    result.leakage = measure_leakage(params, result.best_waveform, psi0);
    return result;
}

OptimizationResult optimize_dressed_ground(const SystemParams &params, const CVector &coeffs,
                                           const OptimizeOptions &opts) {
    return optimize_dressed_ground(params, dicke_state(params.n_atoms, 0), coeffs, opts);
}

Landscape sweep_landscape(const SystemParams &base_params, const CVector &target_coeffs, const SweepSpec &spec,
                          const OptimizeOptions &opts) {
    if (spec.delta_r.empty() || spec.durations.empty()) {
        throw std::invalid_argument("sweep grids must be non-empty");
    }
    if (spec.steps < 1) {
        throw std::invalid_argument("sweep needs at least one phase step");
    }
    Landscape out;
    out.delta_r = spec.delta_r;
    out.durations = spec.durations;
    size_t cols = spec.durations.size();
    int count = int(spec.delta_r.size() * cols);
    out.cells.resize(count);
    DickeVector psi0 = dicke_state(base_params.n_atoms, 0);

    run_indexed(
        count, opts.threads,
        [&](int index) {
            SweepCell &cell = out.cells[index];
            cell.seed = derive_seed(opts.seed, uint64_t(index) + (uint64_t(1) << 32));
            try {
                SystemParams params = base_params;
                params.delta_r = spec.delta_r[index / cols];
                if (spec.delta_uw_ratio) {
                    params.delta_uw = *spec.delta_uw_ratio * params.delta_r;
                }
                OptimizeOptions cell_opts = opts;
                cell_opts.steps = spec.steps;
                cell_opts.dt = spec.durations[index % cols] / spec.steps;
                cell_opts.seed = cell.seed;
                cell_opts.threads = 1;
                OptimizationResult r = optimize(params, psi0, dressed_target(params, target_coeffs), cell_opts);
                cell.best_fidelity = r.best_fidelity;
                cell.iterations_used = r.iterations_used;
                cell.fidelity_per_restart = r.fidelity_per_restart;
            } catch (const std::exception &e) {
                cell.failed = true;
                cell.error = e.what();
                cell.best_fidelity = std::numeric_limits<double>::quiet_NaN();
            }
        },
        [](int) { return false; });
    return out;
}

double speed_limit_estimate(const SystemParams &params) {
    double kappa = kappa_exact(params);
    if (kappa == 0) {
        throw SingularityError("kappa is zero; the one-axis-twisting time diverges");
    }
    return M_PI / std::abs(kappa);
}

}  // namespace rydberg
