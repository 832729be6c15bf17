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

#pragma once

#include <span>
#include <vector>

#include "magblock/liouvillian.hpp"

namespace magblock {

// Below this <m^dag m> a normalised correlation is reported as undefined.
inline constexpr double kVacuumFloor = 1e-14;

struct Occupation {
    double magnon = 0.0;
    double qubit = 0.0;
};

template <typename Real>
Occupation occupation(const DensityMatrixT<Real>& rho, const HilbertSpec& spec) {
    if (rho.dim() != spec.dim()) throw DimensionMismatch(rho.dim(), spec.dim());
    const auto m = annihilation<Real>(spec);
    const auto sm = spin_lowering<Real>(spec);
    return {static_cast<double>(expectation(m.adjoint() * m, rho).real()),
            static_cast<double>(expectation(sm.adjoint() * sm, rho).real())};
}

// <m^dag m^dag m m> / <m^dag m>^2.
template <typename Real>
double g2_zero(const DensityMatrixT<Real>& rho, const HilbertSpec& spec) {
    if (rho.dim() != spec.dim()) throw DimensionMismatch(rho.dim(), spec.dim());
    const auto m = annihilation<Real>(spec);
    const ComplexMatrix<Real> mm = m * m;
    const Real n = expectation(m.adjoint() * m, rho).real();
    if (!(n >= Real(kVacuumFloor))) throw VacuumState(static_cast<double>(n));
    const Real num = expectation(mm.adjoint() * mm, rho).real();
    return static_cast<double>(std::max(num, Real(0)) / (n * n));
}

struct CorrelationOptions {
    SteadyStateOptions steady = {};
    IntegratorOptions integrator = {};
};

// Quantum-regression g2(t): propagate B(0) = m rho_ss m^dag under L and read
// Tr[m^dag m B(t)] / <m^dag m>^2. B is never renormalised; the absolute
// tolerance is scaled by its largest initial entry.
template <typename Real>
std::vector<double> g2_tau(const LiouvillianT<Real>& L, const DensityMatrixT<Real>& rho_ss,
                           const HilbertSpec& spec, std::span<const double> times,
                           const IntegratorOptions& integrator = {}) {
    if (rho_ss.dim() != spec.dim()) throw DimensionMismatch(rho_ss.dim(), spec.dim());
    const auto m = annihilation<Real>(spec);
    const ComplexMatrix<Real> md = m.adjoint();
    const ComplexMatrix<Real> num_op = md * m;
    const Real n = trace_product(num_op, rho_ss.matrix()).real();
    if (!(n >= Real(kVacuumFloor))) throw VacuumState(static_cast<double>(n));

    const ComplexMatrix<Real> b0 = m * rho_ss.matrix() * md;
    IntegratorOptions opt = integrator;
    const double scale = static_cast<double>(b0.cwiseAbs().maxCoeff());
    if (scale > 0.0) opt.atol *= scale;

    const auto traj = propagate<Real>(L, vectorize(b0), times, opt);
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto& v : traj) {
        const Real num = trace_product(num_op, unvectorize(v, spec.dim())).real();
        out.push_back(static_cast<double>(num / (n * n)));
    }
    return out;
}

template <typename Real = double>
std::vector<double> g2_tau(const SystemParams& p, const HilbertSpec& spec, std::span<const double> times,
                           const CorrelationOptions& opt = {}) {
    validate(p);
    const auto L = build_liouvillian<Real>(p, spec);
    const auto rho = steady_state(L, opt.steady);
    return g2_tau<Real>(L, rho, spec, times, opt.integrator);
}

}  // namespace magblock
