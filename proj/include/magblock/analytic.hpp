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

/*! \file analytic.hpp
    \brief Weak-drive closed forms for the magnon correlation and the blockade loci.

    The state is truncated to two excitations,
        |psi> = |0,g> + C0e |0,e> + C1g |1,g> + C1e |1,e> + C2g |2,g>,
    and the amplitudes are the steady state of the no-jump Schroedinger
    equation with H_non. With Db = Delta - i kappa/2 the common denominators are
        C = g^2 - Db^2 + DF^2,
        D = 2 Db^2 + 2 Db DF - g^2.

    g2(0) is approximated by 2 |C2g|^2 / |C1g|^4. The blockade conditions are
    the kappa -> 0 zeros of the factors of that ratio:
        CMB   |C|^2 = 0      Delta = +-sqrt(g^2 + DF^2)
        UMB   |B|^2 = 0      Delta = DF/2 + lambda g +- sqrt((DF/2 + lambda g)^2 - (1 + lambda^2) g^2 / 2)
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "magblock/model.hpp"

namespace magblock {

enum class DriveMode { single, double_drive };

// Closed forms divide by |C|, |D| and |C1g|; below this they are refused.
inline constexpr double kAnalyticSingularityFloor = 1e-12;

template <typename Real = double>
struct AmplitudeSetT {
    std::complex<Real> c0e, c1g, c1e, c2g;
    Real a_sq = 0, b_sq = 0, c_sq = 0, d_sq = 0;  // |A|^2, |B|^2, |C|^2, |D|^2
    DriveMode drive_mode = DriveMode::single;
};

using AmplitudeSet = AmplitudeSetT<double>;

template <typename Real = double>
struct FactorMagnitudes {
    Real a_sq, b_sq, c_sq, d_sq;
};

// Real-polynomial forms of |A|^2 |B|^2 |C|^2 |D|^2; lambda = 0 gives the
// single-drive factors.
template <typename Real = double>
FactorMagnitudes<Real> factor_magnitudes(Real g, Real kappa, Real delta, Real delta_f, Real lambda) {
    const Real k2 = kappa * kappa;
    const Real a_lin = (delta - delta_f - lambda * g) * (delta - delta_f - lambda * g) + k2 / 4;
    const Real b_re = -2 * (delta * delta - k2 / 4) + (4 * lambda * g + 2 * delta_f) * delta -
                      (1 + lambda * lambda) * g * g;
    const Real b_im = 2 * delta - 2 * lambda * g - delta_f;
    const Real c_re = g * g + delta_f * delta_f - delta * delta + k2 / 4;
    const Real d_re = 2 * delta * delta + 2 * delta_f * delta - g * g - k2 / 2;
    const Real d_im = 2 * delta + delta_f;
    return {a_lin * a_lin, b_re * b_re + k2 * b_im * b_im, c_re * c_re + k2 * delta * delta,
            d_re * d_re + k2 * d_im * d_im};
}

namespace detail {

template <typename Real>
struct Denominators {
    std::complex<Real> db, c, d;
};

template <typename Real>
Denominators<Real> denominators(const SystemParams& p) {
    const Real g(p.g), df(p.delta_f);
    const std::complex<Real> db(Real(p.delta), -Real(p.kappa) / Real(2));
    const std::complex<Real> c = g * g - db * db + df * df;
    const std::complex<Real> d = Real(2) * db * db + Real(2) * db * df - g * g;
    if (std::abs(c) < Real(kAnalyticSingularityFloor))
        throw AnalyticSingularity("closed-form amplitudes singular: |C| below floor");
    if (std::abs(d) < Real(kAnalyticSingularityFloor))
        throw AnalyticSingularity("closed-form amplitudes singular: |D| below floor");
    return {db, c, d};
}

inline void require_magnon_drive(const SystemParams& p) {
    if (!(p.omega_m_drive > 0.0)) throw InvalidArgument("analytic amplitudes need omega_m > 0");
}

}  // namespace detail

// Magnon drive only. Omega_NV is ignored.
template <typename Real = double>
AmplitudeSetT<Real> amplitudes_single(const SystemParams& p) {
    detail::require_magnon_drive(p);
    const auto [db, c, d] = detail::denominators<Real>(p);
    const Real om(p.omega_m_drive), g(p.g), df(p.delta_f);
    const Real s2 = std::numbers::sqrt2_v<Real>;
    const Real om2 = om * om;

    AmplitudeSetT<Real> a;
    a.c0e = -om * g / c;
    a.c1g = om * (db - df) / c;
    a.c1e = -(Real(-4) * om2 * g * db) / (Real(2) * c * d);
    a.c2g = (Real(-2) * s2 * om2 * db * db + Real(2) * s2 * om2 * df * db - s2 * om2 * g * g) / (Real(2) * c * d);

    const auto f = factor_magnitudes<Real>(g, Real(p.kappa), Real(p.delta), df, Real(0));
    a.a_sq = f.a_sq;
    a.b_sq = f.b_sq;
    a.c_sq = f.c_sq;
    a.d_sq = f.d_sq;
    a.drive_mode = DriveMode::single;
    return a;
}

// Magnon and qubit drives.
template <typename Real = double>
AmplitudeSetT<Real> amplitudes_double(const SystemParams& p) {
    detail::require_magnon_drive(p);
    const auto [db, c, d] = detail::denominators<Real>(p);
    const Real om(p.omega_m_drive), on(p.omega_nv_drive), g(p.g), df(p.delta_f);
    const Real s2 = std::numbers::sqrt2_v<Real>;

    AmplitudeSetT<Real> a;
    a.c0e = (on * (db + df) - om * g) / c;
    a.c1g = (om * (db - df) - on * g) / c;
    a.c1e = -(Real(4) * om * on * db * db + (Real(4) * om * on * df - Real(4) * om * om * g - Real(2) * on * on * g) * db +
              Real(2) * om * on * g * g - Real(2) * on * on * g * df) /
            (Real(2) * c * d);
    a.c2g = (Real(-2) * s2 * om * om * db * db + (Real(4) * s2 * om * on * g + Real(2) * s2 * om * om * df) * db -
             s2 * (om * om + on * on) * g * g) /
            (Real(2) * c * d);

    const Real lambda = on / om;
    const auto f = factor_magnitudes<Real>(g, Real(p.kappa), Real(p.delta), df, lambda);
    a.a_sq = f.a_sq;
    a.b_sq = f.b_sq;
    a.c_sq = f.c_sq;
    a.d_sq = f.d_sq;
    a.drive_mode = DriveMode::double_drive;
    return a;
}

template <typename Real = double>
AmplitudeSetT<Real> amplitudes(const SystemParams& p) {
    return p.omega_nv_drive == 0.0 ? amplitudes_single<Real>(p) : amplitudes_double<Real>(p);
}

// 2 |C2g|^2 / |C1g|^4 from the raw amplitudes.
template <typename Real = double>
double g2_analytic(const AmplitudeSetT<Real>& a) {
    const Real c1 = std::abs(a.c1g);
    if (c1 < Real(kAnalyticSingularityFloor))
        throw AnalyticSingularity("closed-form g2 singular: |C1g| below floor");
    const Real c1sq = c1 * c1;
    return static_cast<double>(Real(2) * std::norm(a.c2g) / (c1sq * c1sq));
}

template <typename Real = double>
double g2_analytic(const SystemParams& p) {
    return g2_analytic<Real>(amplitudes<Real>(p));
}

// |B|^2 |C|^2 / (|A|^2 |D|^2); used to cross-check the raw-amplitude route.
template <typename Real = double>
double g2_analytic_factored(const SystemParams& p) {
    const Real lambda = p.omega_nv_drive == 0.0 ? Real(0) : Real(drive_ratio(p));
    const auto f = factor_magnitudes<Real>(Real(p.g), Real(p.kappa), Real(p.delta), Real(p.delta_f), lambda);
    return static_cast<double>(f.b_sq * f.c_sq / (f.a_sq * f.d_sq));
}

// Distance along Delta to the nearest kappa -> 0 zero of C, D or C1g.
inline double singularity_distance(const SystemParams& p) {
    const double lambda = p.omega_m_drive > 0.0 ? p.omega_nv_drive / p.omega_m_drive : 0.0;
    const double r_c = std::hypot(p.g, p.delta_f);
    const double r_d = std::sqrt(p.delta_f * p.delta_f + 2.0 * p.g * p.g);
    const double poles[] = {r_c, -r_c, (-p.delta_f + r_d) / 2.0, (-p.delta_f - r_d) / 2.0,
                            p.delta_f + lambda * p.g};
    double best = std::numeric_limits<double>::infinity();
    for (double x : poles) best = std::min(best, std::abs(p.delta - x));
    return best;
}

// ---------------------------------------------------------------------------
// Blockade conditions

enum class Regime { real_pair, degenerate, no_real_solution };

struct ConditionSolution {
    std::vector<double> roots;  // ascending; empty iff no_real_solution
    Regime regime = Regime::no_real_solution;
};

namespace detail {

// center +- sqrt(disc)
inline ConditionSolution symmetric_roots(double center, double disc) {
    if (disc < 0.0) return {{}, Regime::no_real_solution};
    if (disc == 0.0) return {{center}, Regime::degenerate};
    const double s = std::sqrt(disc);
    return {{center - s, center + s}, Regime::real_pair};
}

inline void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite and >= 0");
}

}  // namespace detail

// CMB locus: Delta = +-sqrt(g^2 + DF^2).
inline ConditionSolution cmb_condition(double g, double delta_f) {
    detail::require_nonnegative(g, "g");
    return detail::symmetric_roots(0.0, g * g + delta_f * delta_f);
}

struct LocusPoint {
    double delta;
    double delta_f;
};

// The finite-kappa points where |B|^2 = 0 exactly under a magnon drive:
// Delta = +-sqrt(2 g^2 - kappa^2) / 2 with DF = 2 Delta.
struct FiniteKappaLocus {
    std::vector<LocusPoint> points;  // ascending in Delta
    bool degenerate = false;         // 2 g^2 == kappa^2, both points at the origin
};

struct UmbSingleSolution {
    ConditionSolution lossless;                // kappa -> 0 roots in Delta at fixed DF
    std::optional<FiniteKappaLocus> finite_kappa;  // absent when 2 g^2 < kappa^2
};

inline UmbSingleSolution umb_condition_single(double g, double delta_f, double kappa) {
    detail::require_nonnegative(g, "g");
    detail::require_nonnegative(kappa, "kappa");
    UmbSingleSolution out;
    out.lossless = detail::symmetric_roots(delta_f / 2.0, delta_f * delta_f / 4.0 - g * g / 2.0);
    const double disc = 2.0 * g * g - kappa * kappa;
    if (disc >= 0.0) {
        const double half = std::sqrt(disc) / 2.0;
        FiniteKappaLocus locus;
        locus.degenerate = disc == 0.0;
        locus.points = {{-half, -2.0 * half}, {half, 2.0 * half}};
        out.finite_kappa = locus;
    }
    return out;
}

// UMB under both drives; lambda = 0 reduces to the lossless single-drive roots.
inline ConditionSolution umb_condition_double(double g, double delta_f, double lambda) {
    detail::require_nonnegative(g, "g");
    detail::require_nonnegative(lambda, "lambda");
    const double center = delta_f / 2.0 + lambda * g;
    return detail::symmetric_roots(center, center * center - (1.0 + lambda * lambda) * g * g / 2.0);
}

struct IntersectionPoint {
    int index;       // 1, 2 or 3
    double delta_f;  // NaN when the discriminant is negative
    bool exists;
};

// The pair 2/3 only exists for lambda > 2 sqrt 2. At lambda^2 - 8 within this
// of zero the pair is reported merged and non-existent.
inline constexpr double kIntersectionMergeTolerance = 1e-12;

// DF values where the CMB hyperbola meets the shifted UMB curve.
inline std::array<IntersectionPoint, 3> intersection_points(double g, double lambda) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("g must be > 0");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be > 0");

    std::array<IntersectionPoint, 3> pts{};
    pts[0] = {1, -g * (lambda * lambda - 1.0) / (2.0 * lambda) + 0.0, true};  // no negative zero

    const double disc = lambda * lambda - 8.0;
    const bool exists = disc > kIntersectionMergeTolerance;
    if (disc >= -kIntersectionMergeTolerance) {
        const double root = std::sqrt(std::max(disc, 0.0));
        pts[1] = {2, -g * (lambda + 3.0 * root) / 8.0, exists};
        pts[2] = {3, -g * (lambda - 3.0 * root) / 8.0, exists};
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        pts[1] = {2, nan, false};
        pts[2] = {3, nan, false};
    }
    return pts;
}

}  // namespace magblock
