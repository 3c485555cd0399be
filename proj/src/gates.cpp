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

#include "qnn/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qnn {

namespace {
constexpr Complex kI{0.0, 1.0};
constexpr double kInvSqrt2 = 0.70710678118654752440;
} // namespace

std::string to_string(PauliAxis axis) {
    switch (axis) {
    case PauliAxis::I:
        return "I";
    case PauliAxis::X:
        return "X";
    case PauliAxis::Y:
        return "Y";
    case PauliAxis::Z:
        return "Z";
    }
    return "?";
}

std::string to_string(FixedGate gate) {
    switch (gate) {
    case FixedGate::X:
        return "X";
    case FixedGate::Y:
        return "Y";
    case FixedGate::Z:
        return "Z";
    case FixedGate::H:
        return "H";
    }
    return "?";
}

Mat2 pauli_matrix(PauliAxis axis) {
    switch (axis) {
    case PauliAxis::I:
        return Mat2::identity();
    case PauliAxis::X:
        return {{Complex{}, Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{}}};
    case PauliAxis::Y:
        return {{Complex{}, -kI, kI, Complex{}}};
    case PauliAxis::Z:
        return {{Complex{1.0, 0.0}, Complex{}, Complex{}, Complex{-1.0, 0.0}}};
    }
    throw std::invalid_argument("unknown Pauli axis");
}

Mat2 fixed_gate_matrix(FixedGate gate) {
    switch (gate) {
    case FixedGate::X:
        return pauli_matrix(PauliAxis::X);
    case FixedGate::Y:
        return pauli_matrix(PauliAxis::Y);
    case FixedGate::Z:
        return pauli_matrix(PauliAxis::Z);
    case FixedGate::H:
        return {{Complex{kInvSqrt2, 0.0}, Complex{kInvSqrt2, 0.0},
                 Complex{kInvSqrt2, 0.0}, Complex{-kInvSqrt2, 0.0}}};
    }
    throw std::invalid_argument("unknown fixed gate");
}

Mat2 rotation_matrix(PauliAxis axis, double weight, double dt) {
    if (axis == PauliAxis::I) {
        throw std::invalid_argument("rotation about I is a global phase; not a gate");
    }
    if (!std::isfinite(weight) || !std::isfinite(dt)) {
        throw std::invalid_argument("rotation_matrix requires finite weight and dt");
    }
    const double angle = weight * dt;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const Mat2 sigma = pauli_matrix(axis);
    Mat2 out = Mat2::identity() * Complex{c, 0.0};
    const Mat2 scaled = sigma * (-kI * s);
    for (int i = 0; i < 4; ++i) {
        out.m[i] += scaled.m[i];
    }
    return out;
}

GateOp GateOp::rotation(PauliAxis axis, int target, std::size_t weight_index) {
    if (axis == PauliAxis::I) {
        throw std::invalid_argument("rotation gates about I are disallowed");
    }
    return {Kind::Rotation, target, -1, axis, FixedGate::X, weight_index};
}

GateOp GateOp::fixed_gate(FixedGate gate, int target) {
    return {Kind::Fixed, target, -1, PauliAxis::I, gate, 0};
}

GateOp GateOp::cnot(int control, int target) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    return {Kind::CNot, target, control, PauliAxis::I, FixedGate::X, 0};
}

void GateOp::check(int num_qubits, std::size_t num_params) const {
    if (target < 0 || target >= num_qubits) {
        throw std::out_of_range("gate target out of range");
    }
    switch (kind) {
    case Kind::Rotation:
        if (axis == PauliAxis::I) {
            throw std::invalid_argument("rotation gates about I are disallowed");
        }
        if (weight_index >= num_params) {
            throw std::out_of_range("rotation weight index out of range");
        }
        break;
    case Kind::CNot:
        if (control < 0 || control >= num_qubits) {
            throw std::out_of_range("CNOT control out of range");
        }
        if (control == target) {
            throw std::invalid_argument("CNOT control and target must differ");
        }
        break;
    case Kind::Fixed:
        break;
    }
}

} // namespace qnn
