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

#include "qnn/statevector.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace qnn {

namespace {

constexpr int kMaxQubits = 26;

void check_qubit_count(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("num_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(num_qubits));
    }
}

void check_target(const Statevector &state, int target, const char *what) {
    if (target < 0 || target >= state.num_qubits()) {
        throw std::out_of_range(std::string(what) + " qubit " + std::to_string(target) +
                                " out of range for " + std::to_string(state.num_qubits()) +
                                " qubits");
    }
}

} // namespace

Mat2 Mat2::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}};
}

Mat2 Mat2::operator*(const Mat2 &rhs) const {
    return {{m[0] * rhs.m[0] + m[1] * rhs.m[2], m[0] * rhs.m[1] + m[1] * rhs.m[3],
             m[2] * rhs.m[0] + m[3] * rhs.m[2], m[2] * rhs.m[1] + m[3] * rhs.m[3]}};
}

Mat2 Mat2::operator*(Complex s) const {
    return {{m[0] * s, m[1] * s, m[2] * s, m[3] * s}};
}

double Mat2::unitarity_defect() const {
    const Mat2 uu = *this * adjoint();
    double defect = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Complex expected = (i == 0 || i == 3) ? Complex{1.0, 0.0} : Complex{};
        defect = std::max(defect, std::abs(uu.m[i] - expected));
    }
    return defect;
}

bool Mat2::is_finite() const {
    for (const auto &v : m) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

Statevector::Statevector(int num_qubits) {
    check_qubit_count(num_qubits);
    num_qubits_ = num_qubits;
    amps_.assign(std::size_t{1} << num_qubits, Complex{});
    amps_[0] = Complex{1.0, 0.0};
}

Statevector Statevector::basis_state(int num_qubits, std::size_t index) {
    Statevector state(num_qubits);
    if (index >= state.size()) {
        throw std::out_of_range("basis index " + std::to_string(index) +
                                " out of range for " + std::to_string(num_qubits) +
                                " qubits");
    }
    state.amps_[0] = Complex{};
    state.amps_[index] = Complex{1.0, 0.0};
    return state;
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amps,
                                         bool require_normalized) {
    if (amps.size() < 2 || !std::has_single_bit(amps.size())) {
        throw std::invalid_argument("amplitude count must be 2^N with N >= 1, got " +
                                    std::to_string(amps.size()));
    }
    double norm_sq = 0.0;
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("non-finite amplitude");
        }
        norm_sq += std::norm(a);
    }
    if (require_normalized && std::abs(norm_sq - 1.0) > 1e-10) {
        throw std::invalid_argument("amplitudes not normalized: |psi|^2 = " +
                                    std::to_string(norm_sq));
    }
    Statevector state;
    state.num_qubits_ = std::bit_width(amps.size()) - 1;
    check_qubit_count(state.num_qubits_);
    state.amps_ = std::move(amps);
    return state;
}

double Statevector::norm_sq() const {
    double acc = 0.0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return acc;
}

std::vector<double> Statevector::probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t j = 0; j < amps_.size(); ++j) {
        p[j] = std::norm(amps_[j]);
    }
    return p;
}

Complex inner_product(const Statevector &bra, const Statevector &ket) {
    if (bra.num_qubits() != ket.num_qubits()) {
        throw std::invalid_argument("inner_product dimension mismatch: " +
                                    std::to_string(bra.num_qubits()) + " vs " +
                                    std::to_string(ket.num_qubits()) + " qubits");
    }
    Complex acc{};
    const auto a = bra.amps();
    const auto b = ket.amps();
    for (std::size_t j = 0; j < a.size(); ++j) {
        acc += std::conj(a[j]) * b[j];
    }
    return acc;
}

void apply_single_qubit(Statevector &state, int target, const Mat2 &u) {
    if (!u.is_finite()) {
        throw std::invalid_argument("gate matrix has non-finite entries");
    }
    if (u.unitarity_defect() > 1e-12) {
        throw std::invalid_argument("gate matrix is not unitary within 1e-12");
    }
    apply_single_qubit_unchecked(state, target, u);
}

void apply_single_qubit_unchecked(Statevector &state, int target, const Mat2 &u) {
    check_target(state, target, "target");
    const std::size_t half = std::size_t{1} << target;
    const std::size_t n = state.size();
    auto amps = state.amps();
    const Complex u00 = u.m[0], u01 = u.m[1], u10 = u.m[2], u11 = u.m[3];

    // Disjoint (j, j|half) pairs.
    for (std::size_t block = 0; block < n; block += 2 * half) {
        for (std::size_t offset = 0; offset < half; ++offset) {
            const std::size_t j0 = block + offset;
            const std::size_t j1 = j0 + half;
            const Complex a0 = amps[j0];
            const Complex a1 = amps[j1];
            amps[j0] = u00 * a0 + u01 * a1;
            amps[j1] = u10 * a0 + u11 * a1;
        }
    }
}

void apply_cnot(Statevector &state, int control, int target) {
    check_target(state, control, "control");
    check_target(state, target, "target");
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    const std::size_t n = state.size();
    auto amps = state.amps();

    for (std::size_t j = 0; j < n; ++j) {
        if ((j & cmask) != 0 && (j & tmask) == 0) {
            std::swap(amps[j], amps[j | tmask]);
        }
    }
}

void check_normalized(const Statevector &state, double tol) {
    const double defect = std::abs(state.norm_sq() - 1.0);
    if (defect > tol) {
        throw std::runtime_error("statevector norm invariant violated: ||psi||^2 - 1 = " +
                                 std::to_string(defect));
    }
}

namespace {

void write_u32_le(std::ostream &out, std::uint32_t v) {
    const std::array<unsigned char, 4> b{
        static_cast<unsigned char>(v & 0xff), static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char *>(b.data()), b.size());
}

void write_f64_le(std::ostream &out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    std::array<unsigned char, 8> b;
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    }
    out.write(reinterpret_cast<const char *>(b.data()), b.size());
}

std::uint32_t read_u32_le(std::istream &in) {
    std::array<unsigned char, 4> b;
    in.read(reinterpret_cast<char *>(b.data()), b.size());
    if (!in) {
        throw std::runtime_error("statevector snapshot truncated");
    }
    return std::uint32_t{b[0]} | (std::uint32_t{b[1]} << 8) | (std::uint32_t{b[2]} << 16) |
           (std::uint32_t{b[3]} << 24);
}

double read_f64_le(std::istream &in) {
    std::array<unsigned char, 8> b;
    in.read(reinterpret_cast<char *>(b.data()), b.size());
    if (!in) {
        throw std::runtime_error("statevector snapshot truncated");
    }
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
        bits |= std::uint64_t{b[i]} << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

constexpr char kSnapshotMagic[4] = {'Q', 'S', 'V', '1'};

} // namespace

void save_statevector(const Statevector &state, std::ostream &out) {
    out.write(kSnapshotMagic, 4);
    write_u32_le(out, static_cast<std::uint32_t>(state.num_qubits()));
    for (const auto &a : state.amps()) {
        write_f64_le(out, a.real());
        write_f64_le(out, a.imag());
    }
    if (!out) {
        throw std::runtime_error("failed to write statevector snapshot");
    }
}

void save_statevector(const Statevector &state, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    save_statevector(state, out);
}

Statevector load_statevector(std::istream &in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0) {
        throw std::runtime_error("bad statevector snapshot magic (want \"QSV1\")");
    }
    const auto num_qubits = static_cast<int>(read_u32_le(in));
    check_qubit_count(num_qubits);
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    for (auto &a : amps) {
        const double re = read_f64_le(in);
        const double im = read_f64_le(in);
        a = Complex{re, im};
    }
    if (in.peek() != std::char_traits<char>::eof()) {
        throw std::runtime_error("trailing bytes after statevector snapshot payload");
    }
    return Statevector::from_amplitudes(std::move(amps));
}

Statevector load_statevector(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load_statevector(in);
}

} // namespace qnn
