// Copyright 2026 The magblock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "magblock/density_matrix.hpp"
#include "magblock/operators.hpp"
#include "oracles.hpp"

using namespace magblock;

TEST_CASE("HilbertSpec rejects truncations below two excitations") {
    CHECK_THROWS_AS(HilbertSpec(1), InvalidArgument);
    CHECK_THROWS_AS(HilbertSpec(-3), InvalidArgument);
    const HilbertSpec spec(2);
    CHECK(spec.dim() == 6);
    CHECK(spec.index(1, Spin::excited) == 3);
    CHECK_THROWS_AS(spec.index(3, Spin::ground), InvalidArgument);
}

TEST_CASE("annihilation matrix elements") {
    const HilbertSpec spec(2);
    const auto m = annihilation(spec);
    CHECK(m(spec.index(1, Spin::ground), spec.index(2, Spin::ground)).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(m(spec.index(0, Spin::excited), spec.index(1, Spin::excited)).real() == doctest::Approx(1.0));

    const auto vac = basis_state(spec, 0, Spin::ground);
    CHECK((m * vac).norm() == 0.0);
}

TEST_CASE("number operator diagonal in magnon-major order") {
    const HilbertSpec spec(5);
    const auto n = number_operator(spec);
    const double expected[] = {0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5};
    for (int i = 0; i < spec.dim(); ++i) CHECK(n(i, i).real() == expected[i]);
    CHECK((n - Operator(n.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("spin lowering") {
    const HilbertSpec spec(3);
    const auto sm = spin_lowering(spec);
    CHECK(sm(spec.index(0, Spin::ground), spec.index(0, Spin::excited)) == std::complex<double>(1.0, 0.0));
    CHECK((sm * sm).norm() == 0.0);

    // s+ s- projects on the excited spin states.
    const Operator proj = spin_raising(spec) * sm;
    for (int n = 0; n <= spec.n_max(); ++n) {
        CHECK(proj(spec.index(n, Spin::excited), spec.index(n, Spin::excited)).real() == 1.0);
        CHECK(proj(spec.index(n, Spin::ground), spec.index(n, Spin::ground)).real() == 0.0);
    }
    CHECK((proj * proj - proj).norm() == 0.0);

    // {s+, s-} = 1 exactly.
    CHECK((anticommutator(spin_raising(spec), sm) - identity(spec)).norm() == 0.0);
}

TEST_CASE("canonical commutator holds below the truncation edge") {
    for (int n_max : {2, 4, 7}) {
        const HilbertSpec spec(n_max);
        const auto m = annihilation(spec);
        const Operator c = commutator(m, creation(spec));
        for (int f = 0; f <= n_max; ++f)
            for (Spin s : {Spin::ground, Spin::excited}) {
                const int i = spec.index(f, s);
                const double expected = f < n_max ? 1.0 : -static_cast<double>(n_max);
                CHECK(c(i, i).real() == doctest::Approx(expected).epsilon(1e-14));
            }
        CHECK((c - Operator(c.diagonal().asDiagonal())).norm() < 1e-14);
    }
}

TEST_CASE("dagger is an involution and construction is deterministic") {
    const HilbertSpec spec(4);
    const auto m = annihilation(spec);
    CHECK((dagger(dagger(m)) - m).norm() == 0.0);
    const auto again = annihilation(HilbertSpec(4));
    CHECK(std::memcmp(m.data(), again.data(), sizeof(std::complex<double>) * m.size()) == 0);
}

TEST_CASE("expectation value pairing") {
    const HilbertSpec spec(3);
    std::mt19937_64 rng(7);
    const auto rho = DensityMatrix::from_matrix(oracle::random_density(spec.dim(), rng));
    CHECK(std::abs(expectation(identity(spec), rho) - 1.0) < 1e-13);
    CHECK(std::abs(expectation(number_operator(spec), DensityMatrix::vacuum(spec))) == 0.0);

    for (int trial = 0; trial < 50; ++trial) {
        const auto r = DensityMatrix::from_matrix(oracle::random_density(spec.dim(), rng));
        const Operator a = oracle::random_hermitian(spec.dim(), rng);
        const auto e = expectation(a, r);
        CHECK(std::abs(e.imag()) < 1e-12);
        CHECK(std::abs(e - (r.matrix() * a).trace()) < 1e-12);
    }

    const HilbertSpec other(4);
    CHECK_THROWS_AS(expectation(identity(other), rho), DimensionMismatch);
}

TEST_CASE("density matrix validation") {
    const HilbertSpec spec(2);
    Operator m = Operator::Zero(spec.dim(), spec.dim());
    m(0, 0) = 0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidState);
    m(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix::from_matrix(m));
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidState);
    m(0, 1) = 0.0;
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(m), InvalidState);
}
