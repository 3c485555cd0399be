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

#include "qnn/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qnn {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols) {}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex{1.0, 0.0};
    }
    return m;
}

CMatrix CMatrix::from_mat2(const Mat2 &u) {
    CMatrix m(2, 2);
    m(0, 0) = u.m[0];
    m(0, 1) = u.m[1];
    m(1, 0) = u.m[2];
    m(1, 1) = u.m[3];
    return m;
}

CMatrix CMatrix::operator*(const CMatrix &rhs) const {
    if (cols_ != rhs.rows_) {
        throw std::invalid_argument("CMatrix product shape mismatch");
    }
    CMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Complex aik = (*this)(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += aik * rhs(k, j);
            }
        }
    }
    return out;
}

CMatrix CMatrix::operator+(const CMatrix &rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw std::invalid_argument("CMatrix sum shape mismatch");
    }
    CMatrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) {
        out.a_[i] += rhs.a_[i];
    }
    return out;
}

CMatrix CMatrix::operator*(Complex s) const {
    CMatrix out = *this;
    for (auto &v : out.a_) {
        v *= s;
    }
    return out;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

std::vector<Complex> CMatrix::apply(std::span<const Complex> v) const {
    if (v.size() != cols_) {
        throw std::invalid_argument("CMatrix apply shape mismatch");
    }
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        Complex acc{};
        for (std::size_t j = 0; j < cols_; ++j) {
            acc += (*this)(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

double CMatrix::max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw std::invalid_argument("CMatrix diff shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.a_.size(); ++i) {
        m = std::max(m, std::abs(a.a_[i] - b.a_[i]));
    }
    return m;
}

double CMatrix::hermiticity_defect() const {
    return max_abs_diff(*this, adjoint());
}

double CMatrix::unitarity_defect() const {
    return max_abs_diff(*this * adjoint(), identity(rows_));
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia) {
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const Complex f = a(ia, ja);
            if (f == Complex{}) {
                continue;
            }
            for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
                }
            }
        }
    }
    return out;
}

CMatrix embed_single_qubit(const Mat2 &u, int target, int num_qubits) {
    if (target < 0 || target >= num_qubits) {
        throw std::out_of_range("embed target out of range");
    }
    // Qubit 0 is the LSB, so it sits rightmost in the Kronecker chain.
    const CMatrix high = CMatrix::identity(std::size_t{1} << (num_qubits - 1 - target));
    const CMatrix low = CMatrix::identity(std::size_t{1} << target);
    return kron(high, kron(CMatrix::from_mat2(u), low));
}

CMatrix cnot_matrix(int control, int target, int num_qubits) {
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    if (control < 0 || control >= num_qubits || target < 0 || target >= num_qubits) {
        throw std::out_of_range("CNOT qubit out of range");
    }
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    CMatrix out(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t image = (j & cmask) ? (j ^ tmask) : j;
        out(image, j) = Complex{1.0, 0.0};
    }
    return out;
}

CMatrix dense_expm(const CMatrix &h, double t) {
    if (h.rows() != h.cols() || h.rows() == 0 || h.rows() > 32) {
        throw std::invalid_argument("dense_expm supports square matrices up to 32x32, got " +
                                    std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
    }
    if (!std::isfinite(t)) {
        throw std::invalid_argument("dense_expm requires finite t");
    }
    if (h.hermiticity_defect() > 1e-10) {
        throw std::invalid_argument("dense_expm input is not Hermitian within 1e-10");
    }

    // A = -i t H, scaled down until ||A||_max <= 0.5, exponentiated by Taylor
    // series, then squared back up.
    CMatrix a = h * Complex{0.0, -t};
    double max_abs = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            max_abs = std::max(max_abs, std::abs(a(i, j)));
        }
    }
    // Row-sum bound on the spectral radius.
    const double norm_bound = max_abs * static_cast<double>(a.rows());
    int squarings = 0;
    while (norm_bound / std::pow(2.0, squarings) > 0.5) {
        ++squarings;
    }
    a = a * Complex{std::pow(0.5, squarings), 0.0};

    CMatrix result = CMatrix::identity(a.rows());
    CMatrix term = CMatrix::identity(a.rows());
    for (int k = 1; k <= 40; ++k) {
        term = term * a * Complex{1.0 / k, 0.0};
        result = result + term;
        double term_max = 0.0;
        for (std::size_t i = 0; i < term.rows(); ++i) {
            for (std::size_t j = 0; j < term.cols(); ++j) {
                term_max = std::max(term_max, std::abs(term(i, j)));
            }
        }
        if (term_max < 1e-18) {
            break;
        }
    }
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
    }
    return result;
}

} // namespace qnn
