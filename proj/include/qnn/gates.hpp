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
 * Fixed gates, parameterized Pauli rotations and the circuit-element
 * description used to assemble ansatz layers.
 */
#pragma once

#include <cstddef>
#include <string>

#include "qnn/statevector.hpp"

namespace qnn {

enum class PauliAxis { I, X, Y, Z };

enum class FixedGate { X, Y, Z, H };

std::string to_string(PauliAxis axis);
std::string to_string(FixedGate gate);

/// Standard Pauli matrix (or identity) for `axis`.
Mat2 pauli_matrix(PauliAxis axis);

/// Matrix of a fixed gate: the Paulis plus Hadamard.
Mat2 fixed_gate_matrix(FixedGate gate);

/**
 * @brief Gate of a weighted Pauli exponential: cos(w*dt) I - i sin(w*dt) sigma.
 *
 * This is the closed form of exp(-i w sigma dt) for sigma in {X, Y, Z}. The
 * angle convention is the full product w*dt (no half-angle), so the matrix is
 * 2*pi/dt-periodic in w. Axis I is rejected: it contributes only a global
 * phase and is never part of an ansatz.
 */
Mat2 rotation_matrix(PauliAxis axis, double weight, double dt);

/**
 * @brief One primitive circuit element.
 *
 * Either a parameterized Pauli rotation bound to a weight index, a fixed
 * single-qubit gate, or a CNOT.
 */
struct GateOp {
    enum class Kind { Rotation, Fixed, CNot };

    Kind kind;
    int target;
    int control;            ///< CNot only, -1 otherwise.
    PauliAxis axis;          ///< Rotation only.
    FixedGate fixed;         ///< Fixed only.
    std::size_t weight_index; ///< Rotation only.

    static GateOp rotation(PauliAxis axis, int target, std::size_t weight_index);
    static GateOp fixed_gate(FixedGate gate, int target);
    static GateOp cnot(int control, int target);

    /// Validates qubit/weight indices against the owning circuit's bounds.
    void check(int num_qubits, std::size_t num_params) const;

    bool operator==(const GateOp &other) const = default;
};

} // namespace qnn
