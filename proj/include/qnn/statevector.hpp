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
 * Dense statevector of an N-qubit register and the primitive update kernels
 * (single-qubit unitaries, CNOT) everything else is built on.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qnn {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
struct Mat2 {
    std::array<Complex, 4> m;

    Complex operator()(int r, int c) const { return m[2 * r + c]; }

    /// Conjugate transpose.
    Mat2 adjoint() const;
    /// Matrix product this * rhs.
    Mat2 operator*(const Mat2 &rhs) const;
    /// Scalar product.
    Mat2 operator*(Complex s) const;
    /// max_ij |(U U^dag - I)_ij|, the unitarity defect.
    double unitarity_defect() const;
    /// All four entries finite.
    bool is_finite() const;

    static Mat2 identity() { return {{Complex{1.0, 0.0}, {}, {}, Complex{1.0, 0.0}}}; }
};

/**
 * @brief Normalized pure state of `num_qubits` qubits as 2^N dense complex
 * amplitudes.
 *
 * Basis index j is read with qubit 0 as the least significant bit, so the
 * amplitude of |q_{N-1} ... q_1 q_0> lives at index sum_k q_k 2^k. Every
 * constructor leaves the state normalized; unitary updates preserve the norm
 * and violations are reported, never silently repaired.
 */
class Statevector {
  public:
    /// |0...0> on `num_qubits` qubits (num_qubits >= 1).
    explicit Statevector(int num_qubits);

    /// Computational basis state |index>.
    static Statevector basis_state(int num_qubits, std::size_t index);

    /**
     * @brief Wrap a raw amplitude vector (length 2^N, finite entries).
     *
     * @param amps Amplitudes in basis order.
     * @param require_normalized When true (default), rejects vectors whose
     * norm deviates from 1 by more than 1e-10.
     */
    static Statevector from_amplitudes(std::vector<Complex> amps,
                                       bool require_normalized = true);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amps_.size(); }

    std::span<const Complex> amps() const { return amps_; }
    std::span<Complex> amps() { return amps_; }

    Complex operator[](std::size_t j) const { return amps_[j]; }
    Complex &operator[](std::size_t j) { return amps_[j]; }

    /// Sum of |amp_j|^2.
    double norm_sq() const;

    /// Measurement probabilities p_j = |amp_j|^2 in basis order.
    std::vector<double> probabilities() const;

    bool operator==(const Statevector &other) const = default;

  private:
    Statevector() = default;

    int num_qubits_{0};
    std::vector<Complex> amps_;
};

/// <bra|ket> = sum_j conj(bra_j) ket_j. Throws on dimension mismatch.
Complex inner_product(const Statevector &bra, const Statevector &ket);

/**
 * @brief Apply a 2x2 unitary to `target`, in place.
 *
 * The matrix is validated to be unitary within 1e-12; use
 * apply_single_qubit_unchecked for matrices that are unitary by construction
 * or deliberately non-unitary (derivative insertions).
 */
void apply_single_qubit(Statevector &state, int target, const Mat2 &u);

/// As apply_single_qubit but without the unitarity check. May change the norm.
void apply_single_qubit_unchecked(Statevector &state, int target, const Mat2 &u);

/// Toggle `target` on every basis state whose `control` bit is 1, in place.
void apply_cnot(Statevector &state, int control, int target);

/// Distance of the squared norm from 1; throws std::runtime_error above `tol`.
void check_normalized(const Statevector &state, double tol = 1e-10);

/**
 * Snapshot format: magic "QSV1", little-endian u32 qubit count, then 2^N
 * little-endian f64 pairs (re, im).
 */
void save_statevector(const Statevector &state, std::ostream &out);
void save_statevector(const Statevector &state, const std::string &path);
Statevector load_statevector(std::istream &in);
Statevector load_statevector(const std::string &path);

} // namespace qnn
