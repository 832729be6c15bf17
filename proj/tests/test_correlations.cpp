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

#include <algorithm>

#include <unsupported/Eigen/MatrixFunctions>

#include "magblock/correlations.hpp"
#include "oracles.hpp"

using namespace magblock;
using doctest::Approx;

namespace {

SystemParams fig8(double delta_f, double delta) {
    SystemParams p;
    p.g = 20;
    p.kappa = 0.5;
    p.omega_m_drive = 0.01;
    p = with_drive_ratio(p, 4.0);
    p.delta_f = delta_f;
    p.delta = delta;
    return p;
}

}  // namespace

TEST_CASE("occupation of simple states") {
    const HilbertSpec spec(4);
    const auto occ = occupation(DensityMatrix::vacuum(spec), spec);
    CHECK(occ.magnon == 0.0);
    CHECK(occ.qubit == 0.0);

    const auto e = occupation(DensityMatrix::basis(spec, 2, Spin::excited), spec);
    CHECK(e.magnon == Approx(2.0));
    CHECK(e.qubit == Approx(1.0));
}

TEST_CASE("weak resonant drive of a bare magnon") {
    SystemParams p;
    p.g = 0;
    p.kappa = 0.5;
    p.omega_m_drive = 0.01;
    p.delta = 1.3;
    p.delta_f = -1.3;
    const HilbertSpec spec(6);
    const auto rho = steady_state(build_liouvillian(p, spec));
    const double expected = std::pow(p.omega_m_drive / (p.kappa / 2), 2);  // 1.6e-3
    CHECK(occupation(rho, spec).magnon == Approx(expected).epsilon(0.05));
    CHECK(std::abs(occupation(rho, spec).qubit) < 1e-12);
}

TEST_CASE("vacuum-dominated state has no defined correlation") {
    const HilbertSpec spec(3);
    CHECK_THROWS_AS(g2_zero(DensityMatrix::vacuum(spec), spec), VacuumState);

    SystemParams p;
    p.omega_m_drive = 0;
    p.omega_nv_drive = 0;
    const std::vector<double> t = {0.0};
    CHECK_THROWS_AS(g2_tau(p, spec, t), VacuumState);
}

TEST_CASE("g2 of a two-magnon Fock state") {
    const HilbertSpec spec(3);
    // <n(n-1)> / <n>^2 = 2 / 4
    CHECK(g2_zero(DensityMatrix::basis(spec, 2, Spin::ground), spec) == Approx(0.5));
}

TEST_CASE("g2(t) at zero delay equals g2(0)") {
    for (const auto& p : {fig8(0, 20), fig8(0, 24.8), fig8(11.2, 22.8)}) {
        const HilbertSpec spec(6);
        const auto L = build_liouvillian(p, spec);
        const auto rho = steady_state(L);
        const std::vector<double> t = {0.0};
        const double at0 = g2_tau(L, rho, spec, t).front();
        const double eq = g2_zero(rho, spec);
        CHECK(std::abs(at0 - eq) < 1e-8);
        CHECK(at0 == Approx(eq).epsilon(1e-9));
    }
}

TEST_CASE("g2(t) decorrelates at long delay") {
    for (const auto& p : {fig8(0, 20), fig8(0, 24.8), fig8(11.2, 22.8)}) {
        const std::vector<double> t = {20.0 / p.kappa};
        const auto v = g2_tau(p, HilbertSpec(6), t);
        CHECK(std::abs(v.front() - 1.0) < 0.05);
    }
}

TEST_CASE("g2(t) matches a matrix-exponential propagation of m rho m^dag") {
    const auto p = fig8(0, 24.8);
    const HilbertSpec spec(4);
    const auto L = build_liouvillian(p, spec);
    const auto rho = steady_state(L);
    const std::vector<double> times = {0.05, 0.3, 1.0, 2.2};
    const auto v = g2_tau(L, rho, spec, times);

    const Operator m = annihilation(spec);
    const Operator nop = m.adjoint() * m;
    const double n = trace_product(nop, rho.matrix()).real();
    const Eigen::VectorXcd b0 = vectorize(Operator(m * rho.matrix() * m.adjoint()));
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::MatrixXcd prop = (L.matrix() * times[i]).exp();
        const Operator bt = unvectorize(Eigen::VectorXcd(prop * b0), spec.dim());
        const double ref = trace_product(nop, bt).real() / (n * n);
        CHECK(v[i] == Approx(ref).epsilon(1e-6));
    }
}

TEST_CASE("unconventional blockade trace oscillates above one") {
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(i * 0.02);
    const auto v = g2_tau(fig8(0, 24.8), HilbertSpec(6), times);
    CHECK(*std::max_element(v.begin(), v.end()) > 1.0);
}
