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
 * The layered ansatz and its forward evolution.
 *
 * Each layer applies Rx then Ry on every qubit (qubits ascending) followed by
 * a directed CNOT ring q -> (q+1) mod N. The network is the ordered product
 * of the gate factors: the first op listed acts on the state first.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qnn/gates.hpp"
#include "qnn/statevector.hpp"

namespace qnn {

/// Trainable parameter vector; one entry per rotation gate.
struct Weights {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t k) const { return values[k]; }
    double &operator[](std::size_t k) { return values[k]; }

    /// Rejects non-finite entries.
    void check_finite() const;

    bool operator==(const Weights &other) const = default;
};

/// Ansatz description: gate sequence, time step and parameter count.
struct CircuitSpec {
    int num_qubits{0};
    int num_layers{0};
    double dt{1.0};
    std::vector<GateOp> ops;
    std::size_t num_params{0};
};

/**
 * @brief Build the layered ansatz.
 *
 * Requires num_qubits >= 2 and num_layers >= 1. The op ordering is
 * deterministic, so weight indices (2 per qubit per layer, assigned in op
 * order) are stable across runs. dt > 0 is the global time step multiplying
 * every rotation angle.
 */
CircuitSpec build_ansatz(int num_qubits, int num_layers, double dt = 1.0);

/// Fresh weights, uniform in [-0.1, 0.1], from a seeded generator.
Weights init_weights(const CircuitSpec &spec, std::uint64_t seed);

/**
 * @brief Apply the circuit: |out> = N(w) |input>.
 *
 * Rotations use rotation_matrix(axis, w[k], dt); CNOTs act directly. The
 * output is checked to be normalized within 1e-10.
 */
Statevector forward(const CircuitSpec &spec, const Weights &w, const Statevector &input);

/**
 * @brief Apply the derivative of the circuit with respect to parameter k.
 *
 * Identical to forward except that the factor (-i dt sigma_k) is applied on
 * the k-th rotation's target immediately before that rotation. The result is
 * dN/dw_k |input>; its norm is |dt|, not 1.
 */
Statevector forward_with_generator_insertion(const CircuitSpec &spec, const Weights &w,
                                             const Statevector &input, std::size_t k);

/// Trained-model snapshot written as line-oriented "key value" text.
struct Checkpoint {
    int num_qubits{0};
    int num_layers{0};
    double dt{1.0};
    std::uint64_t seed{0};
    int epoch{0};
    Weights weights;
};

/**
 * Checkpoint text format, one field per line:
 *
 *   format qnn-checkpoint-v1
 *   num_qubits <int>
 *   num_layers <int>
 *   dt <double, 17 significant digits>
 *   seed <uint64>
 *   epoch <int>
 *   num_params <count>
 *   weights
 *   <w_0>
 *   ...
 */
void save_checkpoint(const Checkpoint &ckpt, std::ostream &out);
void save_checkpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint load_checkpoint(std::istream &in);
Checkpoint load_checkpoint(const std::string &path);

} // namespace qnn
