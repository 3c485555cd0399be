// Copyright 2026 The qnnsim Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qnn/loss.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace qnn {

namespace {

void check_forward_args_for_shift(const CircuitSpec &spec, const Weights &w,
                                  const Statevector &psi) {
    if (psi.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("input has " + std::to_string(psi.num_qubits()) +
                                    " qubits, circuit expects " +
                                    std::to_string(spec.num_qubits));
    }
    if (w.size() != spec.num_params) {
        throw std::invalid_argument("weight vector length " + std::to_string(w.size()) +
                                    " does not match num_params " +
                                    std::to_string(spec.num_params));
    }
    w.check_finite();
}

void check_label(const CircuitSpec &spec, const LabelState &y) {
    if (y.target.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("label state has " +
                                    std::to_string(y.target.num_qubits()) +
                                    " qubits, circuit expects " +
                                    std::to_string(spec.num_qubits));
    }
}

/// Positions of the unique rotation op per parameter; throws if a parameter
/// is unbound or bound more than once.
std::vector<std::size_t> rotation_position_per_param(const CircuitSpec &spec) {
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pos(spec.num_params, kUnset);
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        const auto &op = spec.ops[i];
        if (op.kind != GateOp::Kind::Rotation) {
            continue;
        }
        if (op.weight_index >= spec.num_params) {
            throw std::out_of_range("rotation weight index out of range");
        }
        if (pos[op.weight_index] != kUnset) {
            throw std::invalid_argument("parameter " + std::to_string(op.weight_index) +
                                        " is bound to more than one rotation");
        }
        pos[op.weight_index] = i;
    }
    for (std::size_t k = 0; k < pos.size(); ++k) {
        if (pos[k] == kUnset) {
            throw std::invalid_argument("parameter " + std::to_string(k) +
                                        " is not bound to a rotation");
        }
    }
    return pos;
}

std::vector<double> onehot(int class_index) {
    if (class_index < 0 || class_index >= kNumClasses) {
        throw std::out_of_range("class index " + std::to_string(class_index) +
                                " outside [0, " + std::to_string(kNumClasses) + ")");
    }
    std::vector<double> y(kNumClasses, 0.0);
    y[static_cast<std::size_t>(class_index)] = 1.0;
    return y;
}

double mse_against_onehot(const std::vector<double> &q, int class_index) {
    const auto y = onehot(class_index);
    double loss = 0.0;
    for (int i = 0; i < kNumClasses; ++i) {
        const double d = q[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
        loss += d * d;
    }
    return loss;
}

} // namespace

double fidelity_loss(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                     const LabelState &y) {
    check_label(spec, y);
    const Statevector evolved = forward(spec, w, psi);
    // The two cross terms of the squared residual are conjugates, so the loss
    // collapses to a real expression.
    return 2.0 - 2.0 * inner_product(y.target, evolved).real();
}

Gradient fidelity_grad(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                       const LabelState &y) {
    check_label(spec, y);
    Gradient g;
    g.values.resize(spec.num_params);
    for (std::size_t k = 0; k < spec.num_params; ++k) {
        const Statevector derivative = forward_with_generator_insertion(spec, w, psi, k);
        g[k] = -2.0 * inner_product(y.target, derivative).real();
    }
    return g;
}

double probability_mse_loss(const CircuitSpec &spec, const Weights &w,
                            const Statevector &psi, int class_index) {
    const Statevector evolved = forward(spec, w, psi);
    const auto q = readout_distribution(evolved, kNumClasses);
    return mse_against_onehot(q, class_index);
}

Gradient finite_difference_grad(const CircuitSpec &spec, const Weights &w,
                                const Statevector &psi, const LabelState &y,
                                LossKind kind, double h) {
    const auto loss = [&](const Weights &probe) {
        return sample_loss(spec, probe, psi, y, kind);
    };
    return finite_difference_grad(loss, w, h);
}

namespace {

void apply_op_for_shift(Statevector &state, const GateOp &op, const Weights &w,
                        double dt) {
    switch (op.kind) {
    case GateOp::Kind::Rotation:
        apply_single_qubit_unchecked(state, op.target,
                                     rotation_matrix(op.axis, w[op.weight_index], dt));
        break;
    case GateOp::Kind::Fixed:
        apply_single_qubit_unchecked(state, op.target, fixed_gate_matrix(op.fixed));
        break;
    case GateOp::Kind::CNot:
        apply_cnot(state, op.control, op.target);
        break;
    }
}

/**
 * Runs every +/- shifted circuit variant sharing the unshifted prefix: the
 * running prefix state is advanced once per op and each rotation branches
 * into two suffix-only evaluations. `visit(k, up, down)` receives the two
 * shifted final states for parameter k; returns the unshifted final state.
 */
template <typename Visitor>
Statevector shifted_branches(const CircuitSpec &spec, const Weights &w,
                             const Statevector &psi, double shift, Visitor &&visit) {
    check_forward_args_for_shift(spec, w, psi);
    Statevector prefix = psi;
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        const GateOp &op = spec.ops[i];
        if (op.kind == GateOp::Kind::Rotation) {
            Statevector branches[2] = {prefix, prefix};
            const double shifts[2] = {shift, -shift};
            for (int s = 0; s < 2; ++s) {
                apply_single_qubit_unchecked(
                    branches[s], op.target,
                    rotation_matrix(op.axis, w[op.weight_index] + shifts[s], spec.dt));
                for (std::size_t j = i + 1; j < spec.ops.size(); ++j) {
                    apply_op_for_shift(branches[s], spec.ops[j], w, spec.dt);
                }
            }
            visit(op.weight_index, branches[0], branches[1]);
        }
        apply_op_for_shift(prefix, op, w, spec.dt);
    }
    return prefix;
}

Gradient parameter_shift_fidelity(const CircuitSpec &spec, const Weights &w,
                                  const Statevector &psi, const LabelState &y) {
    // The loss is a frequency-dt sinusoid in each parameter, so the exact
    // two-point rule shifts by a quarter period.
    const double shift = std::numbers::pi / (2.0 * spec.dt);
    const double scale = spec.dt / 2.0;
    Gradient g;
    g.values.assign(spec.num_params, 0.0);
    shifted_branches(spec, w, psi, shift,
                     [&](std::size_t k, const Statevector &up, const Statevector &down) {
                         const double loss_up =
                             2.0 - 2.0 * inner_product(y.target, up).real();
                         const double loss_down =
                             2.0 - 2.0 * inner_product(y.target, down).real();
                         g[k] = scale * (loss_up - loss_down);
                     });
    return g;
}

Gradient parameter_shift_probmse(const CircuitSpec &spec, const Weights &w,
                                 const Statevector &psi, int class_index) {
    const auto y = onehot(class_index);
    // Probabilities are frequency-2dt sinusoids in each parameter.
    const double shift = std::numbers::pi / (4.0 * spec.dt);
    const double scale = spec.dt;

    struct Shifted {
        std::array<double, kNumClasses> dp;
        double dmass;
    };
    std::vector<Shifted> per_param(spec.num_params);

    const Statevector evolved = shifted_branches(
        spec, w, psi, shift,
        [&](std::size_t k, const Statevector &up, const Statevector &down) {
            auto &slot = per_param[k];
            slot.dmass = 0.0;
            for (int i = 0; i < kNumClasses; ++i) {
                const auto j = static_cast<std::size_t>(i);
                // Exact derivative of the raw outcome probability.
                slot.dp[j] = scale * (std::norm(up[j]) - std::norm(down[j]));
                slot.dmass += slot.dp[j];
            }
        });

    std::array<double, kNumClasses> p;
    double mass = 0.0;
    for (int i = 0; i < kNumClasses; ++i) {
        p[static_cast<std::size_t>(i)] = std::norm(evolved[static_cast<std::size_t>(i)]);
        mass += p[static_cast<std::size_t>(i)];
    }

    Gradient g;
    g.values.assign(spec.num_params, 0.0);
    if (mass < 1e-12) {
        // Readout falls back to the uniform distribution, which is constant.
        return g;
    }
    for (std::size_t k = 0; k < spec.num_params; ++k) {
        // Quotient rule through q_i = p_i / mass, then the MSE chain rule.
        double acc = 0.0;
        for (int i = 0; i < kNumClasses; ++i) {
            const auto j = static_cast<std::size_t>(i);
            const double q = p[j] / mass;
            const double dq = (per_param[k].dp[j] * mass - p[j] * per_param[k].dmass) /
                              (mass * mass);
            acc += 2.0 * (q - y[j]) * dq;
        }
        g[k] = acc;
    }
    return g;
}

} // namespace

Gradient parameter_shift_grad(const CircuitSpec &spec, const Weights &w,
                              const Statevector &psi, const LabelState &y,
                              LossKind kind) {
    rotation_position_per_param(spec);
    switch (kind) {
    case LossKind::Fidelity:
        return parameter_shift_fidelity(spec, w, psi, y);
    case LossKind::ProbMse:
        return parameter_shift_probmse(spec, w, psi, y.class_index);
    }
    throw std::invalid_argument("unknown loss kind");
}

double sample_loss(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                   const LabelState &y, LossKind kind) {
    switch (kind) {
    case LossKind::Fidelity:
        return fidelity_loss(spec, w, psi, y);
    case LossKind::ProbMse:
        return probability_mse_loss(spec, w, psi, y.class_index);
    }
    throw std::invalid_argument("unknown loss kind");
}

Gradient sample_grad(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                     const LabelState &y, LossKind kind, GradEngine engine,
                     double fd_step) {
    switch (engine) {
    case GradEngine::Analytic:
        if (kind != LossKind::Fidelity) {
            throw std::invalid_argument(
                "the analytic insertion gradient applies to the fidelity loss only; "
                "use the parameter-shift engine for the probability MSE");
        }
        return fidelity_grad(spec, w, psi, y);
    case GradEngine::ParamShift:
        return parameter_shift_grad(spec, w, psi, y, kind);
    case GradEngine::FiniteDiff:
        return finite_difference_grad(spec, w, psi, y, kind, fd_step);
    }
    throw std::invalid_argument("unknown gradient engine");
}

} // namespace qnn
