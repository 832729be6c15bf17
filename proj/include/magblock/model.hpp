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

/*! \file model.hpp
    \brief Driven spin-magnon model in the frame rotating with the drive.

    All rates, detunings and drive amplitudes are dimensionless, measured in
    units of gamma = 2 pi x 1 MHz. Only PhysicalFieldParams carries SI values.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "magblock/operators.hpp"

namespace magblock {

struct SystemParams {
    double g = 0.0;               // spin-magnon coupling
    double kappa = 0.5;           // shared magnon / qubit decay rate
    double delta = 0.0;           // drive detuning
    double delta_f = 0.0;         // half magnon-qubit frequency detuning
    double omega_m_drive = 0.01;  // magnon Rabi frequency
    double omega_nv_drive = 0.0;  // qubit Rabi frequency
    double n_th = 0.0;            // thermal magnon occupation

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// kappa > 0, n_th >= 0, drives >= 0, everything finite.
inline void validate(const SystemParams& p) {
    const double all[] = {p.g, p.kappa, p.delta, p.delta_f, p.omega_m_drive, p.omega_nv_drive, p.n_th};
    for (double v : all)
        if (!std::isfinite(v)) throw InvalidArgument("system parameters must be finite");
    if (!(p.kappa > 0.0)) throw InvalidArgument("kappa must be > 0");
    if (p.n_th < 0.0) throw InvalidArgument("n_th must be >= 0");
    if (p.omega_m_drive < 0.0 || p.omega_nv_drive < 0.0)
        throw InvalidArgument("drive amplitudes must be >= 0");
}

// lambda = Omega_NV / Omega_m. Undefined without a magnon drive.
inline double drive_ratio(const SystemParams& p) {
    if (!(p.omega_m_drive > 0.0)) throw InvalidArgument("drive ratio lambda needs omega_m > 0");
    return p.omega_nv_drive / p.omega_m_drive;
}

inline SystemParams with_drive_ratio(SystemParams p, double lambda) {
    if (!(p.omega_m_drive > 0.0)) throw InvalidArgument("lambda given but omega_m is not > 0");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be finite and >= 0");
    p.omega_nv_drive = lambda * p.omega_m_drive;
    return p;
}

// ---------------------------------------------------------------------------
// Magnetic field -> frequencies

inline constexpr double kGammaUnit = 2.0 * std::numbers::pi * 1.0e6;  // rad/s

struct PhysicalFieldParams {
    double b_z = 0.0;                                        // tesla
    double d0 = 2.0 * std::numbers::pi * 2.87e9;             // rad/s
    double gamma_e = 2.0 * std::numbers::pi * 28.0e9;        // rad/s/T
};

struct FieldFrequencies {
    double omega_m;   // rad/s
    double omega_nv;  // rad/s
    double delta_f;   // rad/s
};

inline FieldFrequencies field_to_detunings(const PhysicalFieldParams& p) {
    if (!(p.b_z >= 0.0)) throw InvalidArgument("b_z must be >= 0");
    const double zeeman = std::abs(p.gamma_e) * p.b_z;
    return {zeeman, p.d0 - zeeman, zeeman - p.d0 / 2.0};
}

// Field at which magnon and qubit are degenerate.
inline double resonance_field(const PhysicalFieldParams& p) { return p.d0 / (2.0 * std::abs(p.gamma_e)); }

inline double to_gamma_units(double angular_frequency) { return angular_frequency / kGammaUnit; }

// ---------------------------------------------------------------------------
// Hamiltonians and dissipators

// (D+DF) m^dag m + (D-DF) s+ s- + g (m s+ + m^dag s-) + Om (m^dag + m) + Onv (s+ + s-)
template <typename Real = double>
OperatorMatrix<Real> build_h_eff(const SystemParams& p, const HilbertSpec& spec) {
    const auto m = annihilation<Real>(spec);
    const auto sm = spin_lowering<Real>(spec);
    const OperatorMatrix<Real> md = m.adjoint();
    const OperatorMatrix<Real> sp = sm.adjoint();

    OperatorMatrix<Real> h = Real(p.delta + p.delta_f) * (md * m) + Real(p.delta - p.delta_f) * (sp * sm) +
                             Real(p.g) * (m * sp + md * sm) + Real(p.omega_m_drive) * (md + m) +
                             Real(p.omega_nv_drive) * (sp + sm);
    return h;
}

// H_eff - i kappa/2 (m^dag m + s+ s-), the no-jump evolution generator.
template <typename Real = double>
OperatorMatrix<Real> build_h_nonhermitian(const SystemParams& p, const HilbertSpec& spec) {
    const auto sm = spin_lowering<Real>(spec);
    const Complex<Real> loss(Real(0), -Real(p.kappa) / Real(2));
    return build_h_eff<Real>(p, spec) + loss * (number_operator<Real>(spec) + sm.adjoint() * sm);
}

template <typename Real = double>
struct CollapseChannel {
    std::string name;
    double rate;  // multiplies D[o] rho = o rho o^dag - {o^dag o, rho}/2
    OperatorMatrix<Real> op;
};

// Magnon bath at occupation n_th, zero-temperature qubit bath.
// Rates use the D[o] normalisation, so the magnon loses quanta at kappa (n_th + 1).
// Channels with zero rate are omitted.
template <typename Real = double>
std::vector<CollapseChannel<Real>> collapse_operators(const SystemParams& p, const HilbertSpec& spec) {
    std::vector<CollapseChannel<Real>> out;
    const auto m = annihilation<Real>(spec);
    out.push_back({"magnon_decay", p.kappa * (p.n_th + 1.0), m});
    if (p.n_th > 0.0) out.push_back({"magnon_pump", p.kappa * p.n_th, m.adjoint()});
    out.push_back({"qubit_decay", p.kappa, spin_lowering<Real>(spec)});
    return out;
}

// ---------------------------------------------------------------------------
// Dressed-state ladder

struct ExcitationSector {
    int excitations = 0;             // N = n + s
    std::vector<double> energies;    // ascending
    double mean = 0.0;
    double half_splitting = 0.0;     // (max - min) / 2
};

// Eigenvalues of the undriven H_eff in each block of fixed n + s. Sector N
// holds |N,g> and |N-1,e>; the top sector (N = n_max + 1) only |n_max,e>.
template <typename Real = double>
std::vector<ExcitationSector> dressed_levels(SystemParams p, const HilbertSpec& spec) {
    p.omega_m_drive = 0.0;
    p.omega_nv_drive = 0.0;
    const OperatorMatrix<Real> h = build_h_eff<Real>(p, spec);

    std::vector<ExcitationSector> sectors;
    for (int n = 0; n <= spec.n_max() + 1; ++n) {
        std::vector<int> idx;
        if (n <= spec.n_max()) idx.push_back(spec.index(n, Spin::ground));
        if (n >= 1) idx.push_back(spec.index(n - 1, Spin::excited));

        OperatorMatrix<Real> block(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) block(i, j) = h(idx[i], idx[j]);
        Eigen::SelfAdjointEigenSolver<OperatorMatrix<Real>> es(block, Eigen::EigenvaluesOnly);

        ExcitationSector s;
        s.excitations = n;
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
            s.energies.push_back(static_cast<double>(es.eigenvalues()(k)));
        s.mean = 0.0;
        for (double e : s.energies) s.mean += e;
        s.mean /= static_cast<double>(s.energies.size());
        s.half_splitting = (s.energies.back() - s.energies.front()) / 2.0;
        sectors.push_back(std::move(s));
    }
    return sectors;
}

}  // namespace magblock
