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
/**
 * @file
 * Loss functions and their gradients.
 *
 * Two losses: the fidelity loss 2 - 2 Re<y|N(w)|psi> (the squared residual
 * between the evolved state and the target state), and the probability MSE
 * between the renormalized 10-class readout and the one-hot label.
 *
 * Three gradient engines:
 *  - analytic: generator insertion, fidelity loss only;
 *  - parameter shift: exact two-evaluation rule per parameter, both losses;
 *  - central finite differences: approximate, any scalar loss.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qnn/circuit.hpp"
#include "qnn/encoder.hpp"

namespace qnn {

enum class LossKind { Fidelity, ProbMse };
enum class GradEngine { Analytic, ParamShift, FiniteDiff };

/// Number of digit classes read out of the register.
inline constexpr int kNumClasses = 10;

struct Gradient {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    double &operator[](std::size_t k) { return values[k]; }
};

/// 2 - 2 Re<y|N(w)|psi>; equals || N(w)|psi> - |y> ||^2. Range [0, 4].
double fidelity_loss(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                     const LabelState &y);

/// Analytic gradient of fidelity_loss: grad_k = -2 Re<y| dN/dw_k |psi>.
Gradient fidelity_grad(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                       const LabelState &y);

/// Sum over 10 classes of (readout_i - onehot_i)^2. Range [0, 2].
double probability_mse_loss(const CircuitSpec &spec, const Weights &w,
                            const Statevector &psi, int class_index);

/**
 * @brief Central-difference gradient of an arbitrary scalar loss.
 *
 * grad_k = (loss(w_k + h) - loss(w_k - h)) / (2h) with every other entry
 * fixed. Requires h > 0.
 */
template <typename LossFn>
Gradient finite_difference_grad(const LossFn &loss, const Weights &w, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite difference step must be positive");
    }
    Weights probe = w;
    Gradient g;
    g.values.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        probe[k] = w[k] + h;
        const double up = loss(probe);
        probe[k] = w[k] - h;
        const double down = loss(probe);
        probe[k] = w[k];
        g[k] = (up - down) / (2.0 * h);
    }
    return g;
}

Gradient finite_difference_grad(const CircuitSpec &spec, const Weights &w,
                                const Statevector &psi, const LabelState &y,
                                LossKind kind, double h = 1e-5);

/**
 * @brief Exact gradient via the parameter-shift rule.
 *
 * Every parameter must be bound to exactly one single-Pauli rotation. With
 * the convention exp(-i w sigma dt):
 *  - the fidelity loss is a single-frequency sinusoid of frequency dt in each
 *    w_k, so grad_k = (dt/2) [L(w_k + pi/(2 dt)) - L(w_k - pi/(2 dt))];
 *  - each readout probability has frequency 2 dt, so dp/dw_k =
 *    dt [p(w_k + pi/(4 dt)) - p(w_k - pi/(4 dt))], propagated exactly through
 *    the readout renormalization and the MSE by the quotient rule.
 *
 * Both variants cost two circuit evaluations per parameter.
 */
Gradient parameter_shift_grad(const CircuitSpec &spec, const Weights &w,
                              const Statevector &psi, const LabelState &y, LossKind kind);

/// Loss dispatch over LossKind.
double sample_loss(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                   const LabelState &y, LossKind kind);

/// Gradient dispatch over (LossKind, GradEngine). Analytic + ProbMse is
/// rejected: the insertion rule applies to the bilinear fidelity loss only.
Gradient sample_grad(const CircuitSpec &spec, const Weights &w, const Statevector &psi,
                     const LabelState &y, LossKind kind, GradEngine engine,
                     double fd_step = 1e-5);

} // namespace qnn
