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
 * Small dense complex matrices for full-Hilbert-space oracles: Kronecker
 * assembly of gates and the exact matrix exponential exp(-i H t).
 *
 * These are deliberately simple O(n^3) routines for registers of at most a
 * few qubits; the simulator proper never touches them.
 */
#pragma once

#include <cstddef>
#include <vector>

#include "qnn/statevector.hpp"

namespace qnn {

/// Row-major dense complex matrix.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);

    static CMatrix identity(std::size_t n);
    static CMatrix from_mat2(const Mat2 &u);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    CMatrix operator*(const CMatrix &rhs) const;
    CMatrix operator+(const CMatrix &rhs) const;
    CMatrix operator*(Complex s) const;
    CMatrix adjoint() const;

    /// Matrix-vector product on a statevector's amplitudes.
    std::vector<Complex> apply(std::span<const Complex> v) const;

    /// max_ij |a_ij - b_ij|.
    static double max_abs_diff(const CMatrix &a, const CMatrix &b);
    /// max_ij |a_ij - A^dag_ij|, the Hermiticity defect.
    double hermiticity_defect() const;
    /// max_ij |(A A^dag - I)_ij|.
    double unitarity_defect() const;

    bool operator==(const CMatrix &other) const = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<Complex> a_;
};

/// Kronecker product; index convention (a kron b)[ia*nb+ib, ja*nb+jb] = a_ij b_ij,
/// so `a` addresses the high bits and `b` the low bits.
CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Expand a single-qubit matrix to the full register, qubit 0 = LSB.
CMatrix embed_single_qubit(const Mat2 &u, int target, int num_qubits);

/// Full CNOT permutation matrix on the register.
CMatrix cnot_matrix(int control, int target, int num_qubits);

/**
 * @brief Exact exp(-i h t) for a Hermitian matrix, by scaling and squaring
 * on the truncated Taylor series.
 *
 * Accepts registers of at most 5 qubits (32x32). The input must be Hermitian
 * within 1e-10; the result is unitary to ~1e-9 or better.
 */
CMatrix dense_expm(const CMatrix &h, double t);

} // namespace qnn
