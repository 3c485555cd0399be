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

#include "qnn/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qnn/rng.hpp"

namespace qnn {

void Weights::check_finite() const {
    for (const double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("non-finite weight");
        }
    }
}

CircuitSpec build_ansatz(int num_qubits, int num_layers, double dt) {
    if (num_qubits < 2) {
        throw std::invalid_argument("ansatz needs at least 2 qubits");
    }
    if (num_layers < 1) {
        throw std::invalid_argument("ansatz needs at least 1 layer");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    CircuitSpec spec;
    spec.num_qubits = num_qubits;
    spec.num_layers = num_layers;
    spec.dt = dt;
    spec.num_params = 2 * static_cast<std::size_t>(num_qubits) * num_layers;
    spec.ops.reserve(static_cast<std::size_t>(num_layers) * 3 * num_qubits);

    std::size_t widx = 0;
    for (int layer = 0; layer < num_layers; ++layer) {
        for (int q = 0; q < num_qubits; ++q) {
            spec.ops.push_back(GateOp::rotation(PauliAxis::X, q, widx++));
            spec.ops.push_back(GateOp::rotation(PauliAxis::Y, q, widx++));
        }
        for (int q = 0; q < num_qubits; ++q) {
            spec.ops.push_back(GateOp::cnot(q, (q + 1) % num_qubits));
        }
    }
    return spec;
}

Weights init_weights(const CircuitSpec &spec, std::uint64_t seed) {
    Rng rng(seed);
    Weights w;
    w.values.resize(spec.num_params);
    for (auto &v : w.values) {
        v = rng.uniform(-0.1, 0.1);
    }
    return w;
}

namespace {

void check_forward_args(const CircuitSpec &spec, const Weights &w,
                        const Statevector &input) {
    if (input.num_qubits() != spec.num_qubits) {
        throw std::invalid_argument("input has " + std::to_string(input.num_qubits()) +
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

void apply_op(Statevector &state, const GateOp &op, const Weights &w, double dt) {
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

} // namespace

Statevector forward(const CircuitSpec &spec, const Weights &w, const Statevector &input) {
    check_forward_args(spec, w, input);
    Statevector state = input;
    for (const auto &op : spec.ops) {
        apply_op(state, op, w, spec.dt);
    }
    check_normalized(state, 1e-10);
    return state;
}

Statevector forward_with_generator_insertion(const CircuitSpec &spec, const Weights &w,
                                             const Statevector &input, std::size_t k) {
    check_forward_args(spec, w, input);
    if (k >= spec.num_params) {
        throw std::out_of_range("parameter index " + std::to_string(k) +
                                " out of range for " + std::to_string(spec.num_params) +
                                " parameters");
    }
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::size_t position = kUnset;
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        const auto &op = spec.ops[i];
        if (op.kind == GateOp::Kind::Rotation && op.weight_index == k) {
            if (position != kUnset) {
                throw std::invalid_argument("parameter " + std::to_string(k) +
                                            " is bound to more than one rotation");
            }
            position = i;
        }
    }
    if (position == kUnset) {
        throw std::out_of_range("parameter index " + std::to_string(k) +
                                " is not bound to any rotation");
    }

    Statevector state = input;
    for (std::size_t i = 0; i < spec.ops.size(); ++i) {
        const auto &op = spec.ops[i];
        if (i == position) {
            // d/dw exp(-i w sigma dt) inserts a factor (-i dt sigma); it
            // commutes with its own exponential so "before" is a convention.
            const Mat2 generator = pauli_matrix(op.axis) * Complex{0.0, -spec.dt};
            apply_single_qubit_unchecked(state, op.target, generator);
        }
        apply_op(state, op, w, spec.dt);
    }
    return state;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(const std::string &detail) {
    throw std::runtime_error("checkpoint parse error: " + detail);
}

std::string expect_field(std::istream &in, const std::string &key) {
    std::string line;
    if (!std::getline(in, line)) {
        parse_fail("unexpected end of file, wanted '" + key + "'");
    }
    std::istringstream ls(line);
    std::string got;
    ls >> got;
    if (got != key) {
        parse_fail("expected field '" + key + "', got '" + got + "'");
    }
    std::string value;
    ls >> value;
    return value;
}

} // namespace

void save_checkpoint(const Checkpoint &ckpt, std::ostream &out) {
    ckpt.weights.check_finite();
    out << "format qnn-checkpoint-v1\n";
    out << "num_qubits " << ckpt.num_qubits << "\n";
    out << "num_layers " << ckpt.num_layers << "\n";
    out << "dt " << format_double(ckpt.dt) << "\n";
    out << "seed " << ckpt.seed << "\n";
    out << "epoch " << ckpt.epoch << "\n";
    out << "num_params " << ckpt.weights.size() << "\n";
    out << "weights\n";
    for (const double w : ckpt.weights.values) {
        out << format_double(w) << "\n";
    }
    if (!out) {
        throw std::runtime_error("failed to write checkpoint");
    }
}

void save_checkpoint(const Checkpoint &ckpt, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    save_checkpoint(ckpt, out);
}

Checkpoint load_checkpoint(std::istream &in) {
    std::string header;
    if (!std::getline(in, header) || header != "format qnn-checkpoint-v1") {
        parse_fail("missing 'format qnn-checkpoint-v1' header");
    }
    Checkpoint ckpt;
    try {
        ckpt.num_qubits = std::stoi(expect_field(in, "num_qubits"));
        ckpt.num_layers = std::stoi(expect_field(in, "num_layers"));
        ckpt.dt = std::stod(expect_field(in, "dt"));
        ckpt.seed = std::stoull(expect_field(in, "seed"));
        ckpt.epoch = std::stoi(expect_field(in, "epoch"));
        const std::size_t num_params = std::stoull(expect_field(in, "num_params"));
        std::string marker;
        if (!std::getline(in, marker) || marker != "weights") {
            parse_fail("missing 'weights' marker");
        }
        ckpt.weights.values.resize(num_params);
        for (std::size_t k = 0; k < num_params; ++k) {
            std::string line;
            if (!std::getline(in, line)) {
                parse_fail("weight list truncated at entry " + std::to_string(k));
            }
            std::size_t consumed = 0;
            ckpt.weights.values[k] = std::stod(line, &consumed);
            if (consumed != line.size()) {
                parse_fail("malformed weight at entry " + std::to_string(k));
            }
        }
    } catch (const std::invalid_argument &) {
        parse_fail("malformed numeric field");
    } catch (const std::out_of_range &) {
        parse_fail("numeric field out of range");
    }
    std::string rest;
    if (std::getline(in, rest) && !rest.empty()) {
        parse_fail("trailing content after weight list");
    }
    ckpt.weights.check_finite();
    const std::size_t expected =
        2 * static_cast<std::size_t>(ckpt.num_qubits) * static_cast<std::size_t>(ckpt.num_layers);
    if (ckpt.num_qubits < 2 || ckpt.num_layers < 1 || ckpt.weights.size() != expected) {
        parse_fail("inconsistent circuit dimensions");
    }
    return ckpt;
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load_checkpoint(in);
}

} // namespace qnn
