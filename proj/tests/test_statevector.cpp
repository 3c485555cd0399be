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

#include <cmath>
#include <sstream>

#include "doctest.h"

#include "qnn/gates.hpp"
#include "qnn/statevector.hpp"
#include "test_helpers.hpp"

using namespace qnn;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("basis_state places a single unit amplitude") {
    const auto zero = Statevector::basis_state(1, 0);
    CHECK(zero[0] == Complex{1.0, 0.0});
    CHECK(zero[1] == Complex{});

    const auto one = Statevector::basis_state(1, 1);
    CHECK(one[0] == Complex{});
    CHECK(one[1] == Complex{1.0, 0.0});

    // |10>: qubit 1 set, qubit 0 clear -> index 2 with the LSB convention.
    const auto two = Statevector::basis_state(2, 2);
    CHECK(two[0] == Complex{});
    CHECK(two[1] == Complex{});
    CHECK(two[2] == Complex{1.0, 0.0});
    CHECK(two[3] == Complex{});

    CHECK_THROWS_AS(Statevector::basis_state(2, 4), std::out_of_range);
    CHECK_THROWS_AS(Statevector::basis_state(0, 0), std::invalid_argument);
}

TEST_CASE("from_amplitudes validates shape, finiteness and norm") {
    CHECK_THROWS_AS(Statevector::from_amplitudes({{1.0, 0.0}, {}, {}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Statevector::from_amplitudes({{0.5, 0.0}, {0.5, 0.0}}),
                    std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(Statevector::from_amplitudes({{nan, 0.0}, {1.0, 0.0}}),
                    std::invalid_argument);
    CHECK_NOTHROW(Statevector::from_amplitudes({{kInvSqrt2, 0.0}, {0.0, kInvSqrt2}}));
}

TEST_CASE("inner_product matches the conjugated sum") {
    const auto zero = Statevector::basis_state(1, 0);
    const auto one = Statevector::basis_state(1, 1);
    CHECK(inner_product(zero, zero) == Complex{1.0, 0.0});
    CHECK(inner_product(zero, one) == Complex{});

    const auto plus = Statevector::from_amplitudes({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}});
    CHECK(inner_product(plus, one).real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(inner_product(plus, one).imag() == doctest::Approx(0.0));

    CHECK_THROWS_AS(inner_product(zero, Statevector::basis_state(2, 0)),
                    std::invalid_argument);
}

TEST_CASE("probabilities are squared moduli") {
    const auto zero = Statevector::basis_state(1, 0);
    CHECK(zero.probabilities() == std::vector<double>{1.0, 0.0});

    const auto plus = Statevector::from_amplitudes({{kInvSqrt2, 0.0}, {kInvSqrt2, 0.0}});
    const auto p = plus.probabilities();
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));

    // alpha = 0.6, beta = 0.8i.
    const auto mixed = Statevector::from_amplitudes({{0.6, 0.0}, {0.0, 0.8}});
    const auto q = mixed.probabilities();
    CHECK(q[0] == doctest::Approx(0.36).epsilon(1e-14));
    CHECK(q[1] == doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("apply_single_qubit: fixed-gate behavior") {
    auto state = Statevector::basis_state(1, 0);
    apply_single_qubit(state, 0, pauli_matrix(PauliAxis::X));
    CHECK(state[0] == Complex{});
    CHECK(state[1] == Complex{1.0, 0.0});

    auto h = Statevector::basis_state(1, 0);
    apply_single_qubit(h, 0, fixed_gate_matrix(FixedGate::H));
    CHECK(h[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));
    CHECK(h[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-14));

    Rng rng(7);
    auto random = testutil::random_state(3, rng);
    const auto before = random;
    apply_single_qubit(random, 1, Mat2::identity());
    CHECK(testutil::max_amp_diff(random, before) == 0.0);
}

TEST_CASE("apply_single_qubit rejects bad input") {
    auto state = Statevector::basis_state(2, 0);
    const Mat2 not_unitary{{Complex{1.0, 0.0}, Complex{}, Complex{}, Complex{2.0, 0.0}}};
    CHECK_THROWS_AS(apply_single_qubit(state, 0, not_unitary), std::invalid_argument);
    CHECK_THROWS_AS(apply_single_qubit(state, 2, Mat2::identity()), std::out_of_range);
    CHECK_THROWS_AS(apply_single_qubit(state, -1, Mat2::identity()), std::out_of_range);
}

TEST_CASE("apply_single_qubit equals the Kronecker-product oracle") {
    Rng rng(11);
    for (int num_qubits = 1; num_qubits <= 4; ++num_qubits) {
        for (int target = 0; target < num_qubits; ++target) {
            const auto state = testutil::random_state(num_qubits, rng);
            // Arbitrary unitary: random Pauli rotation times a fixed gate.
            const Mat2 u = rotation_matrix(PauliAxis::Y, rng.uniform(-2.0, 2.0), 1.0) *
                           fixed_gate_matrix(FixedGate::H);
            auto fast = state;
            apply_single_qubit(fast, target, u);
            const auto full = embed_single_qubit(u, target, num_qubits);
            const auto expected = full.apply(state.amps());
            CHECK(testutil::max_amp_diff(fast, expected) < 1e-12);
        }
    }
}

TEST_CASE("apply_cnot flips the target when the control is set") {
    // |10>: control qubit 1 is set, target qubit 0 flips -> |11>.
    auto state = Statevector::basis_state(2, 2);
    apply_cnot(state, 1, 0);
    CHECK(state[3] == Complex{1.0, 0.0});

    auto zero = Statevector::basis_state(2, 0);
    apply_cnot(zero, 1, 0);
    CHECK(zero[0] == Complex{1.0, 0.0});

    Rng rng(3);
    auto random = testutil::random_state(3, rng);
    const auto before = random;
    apply_cnot(random, 0, 2);
    apply_cnot(random, 0, 2);
    CHECK(testutil::max_amp_diff(random, before) == 0.0);

    CHECK_THROWS_AS(apply_cnot(random, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(apply_cnot(random, 3, 0), std::out_of_range);
}

TEST_CASE("apply_cnot equals the permutation-matrix oracle") {
    Rng rng(13);
    for (int control = 0; control < 3; ++control) {
        for (int target = 0; target < 3; ++target) {
            if (control == target) {
                continue;
            }
            const auto state = testutil::random_state(3, rng);
            auto fast = state;
            apply_cnot(fast, control, target);
            const auto expected = cnot_matrix(control, target, 3).apply(state.amps());
            CHECK(testutil::max_amp_diff(fast, expected) == 0.0);
        }
    }
}

TEST_CASE("norm survives 10,000 unitary applications") {
    Rng rng(29);
    auto state = testutil::random_state(4, rng);
    for (int i = 0; i < 10000; ++i) {
        switch (rng.below(3)) {
        case 0:
            apply_single_qubit_unchecked(
                state, static_cast<int>(rng.below(4)),
                rotation_matrix(PauliAxis::X, rng.uniform(-3.0, 3.0), 1.0));
            break;
        case 1:
            apply_single_qubit_unchecked(state, static_cast<int>(rng.below(4)),
                                         fixed_gate_matrix(FixedGate::H));
            break;
        default: {
            const int control = static_cast<int>(rng.below(4));
            const int target = (control + 1 + static_cast<int>(rng.below(3))) % 4;
            apply_cnot(state, control, target);
            break;
        }
        }
    }
    CHECK(std::abs(state.norm_sq() - 1.0) < 1e-10);
}

TEST_CASE("gate application is linear in the state") {
    Rng rng(31);
    const auto psi1 = testutil::random_state(2, rng);
    const auto psi2 = testutil::random_state(2, rng);
    const Complex a{0.3, -0.2};
    const Complex b{-0.5, 0.7};

    std::vector<Complex> combo(4);
    for (std::size_t j = 0; j < 4; ++j) {
        combo[j] = a * psi1[j] + b * psi2[j];
    }
    auto combined = Statevector::from_amplitudes(combo, /*require_normalized=*/false);

    const Mat2 u = rotation_matrix(PauliAxis::Y, 0.813, 1.0);
    apply_single_qubit_unchecked(combined, 1, u);
    auto lhs1 = psi1;
    auto lhs2 = psi2;
    apply_single_qubit_unchecked(lhs1, 1, u);
    apply_single_qubit_unchecked(lhs2, 1, u);

    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(std::abs(combined[j] - (a * lhs1[j] + b * lhs2[j])) < 1e-12);
    }
}

TEST_CASE("snapshot round trip is exact") {
    Rng rng(17);
    const auto state = testutil::random_state(5, rng);
    std::stringstream buf;
    save_statevector(state, buf);
    const auto loaded = load_statevector(buf);
    CHECK(loaded.num_qubits() == 5);
    CHECK(testutil::max_amp_diff(loaded, state) == 0.0);
}

TEST_CASE("snapshot loader rejects malformed blobs") {
    const auto state = Statevector::basis_state(2, 1);
    std::stringstream buf;
    save_statevector(state, buf);
    const std::string payload = buf.str();

    SUBCASE("bad magic") {
        std::stringstream bad("XSV1" + payload.substr(4));
        CHECK_THROWS_AS(load_statevector(bad), std::runtime_error);
    }
    SUBCASE("truncated") {
        std::stringstream bad(payload.substr(0, payload.size() - 3));
        CHECK_THROWS_AS(load_statevector(bad), std::runtime_error);
    }
    SUBCASE("trailing bytes") {
        std::stringstream bad(payload + "x");
        CHECK_THROWS_AS(load_statevector(bad), std::runtime_error);
    }
}
