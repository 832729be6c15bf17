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

/*! \file liouvillian.hpp
    \brief Dense Lindblad generator, its steady state, and time propagation.

    Density matrices are vectorised by stacking columns, so that
    vec(A X B) = (B^T (x) A) vec(X). Element (i, j) of X lands at i + j*d.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/LU>

#include "magblock/density_matrix.hpp"
#include "magblock/model.hpp"

namespace magblock {

template <typename Derived>
auto vectorize(const Eigen::MatrixBase<Derived>& x) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = x;
    return Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(
        Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(m.data(), m.size()));
}

template <typename Derived>
auto unvectorize(const Eigen::MatrixBase<Derived>& v, Eigen::Index d) {
    using Scalar = typename Derived::Scalar;
    if (v.size() != d * d) throw DimensionMismatch(static_cast<long>(v.size()), static_cast<long>(d * d));
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tmp = v;
    return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(
        Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(tmp.data(), d, d));
}

template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Matrix of a superoperator acting on column-stacked d x d matrices.
template <typename Real = double>
class LiouvillianT {
public:
    using Matrix = ComplexMatrix<Real>;
    using Vector = ComplexVector<Real>;

    LiouvillianT(Matrix entries, Eigen::Index hilbert_dim) : m_(std::move(entries)), d_(hilbert_dim) {
        if (m_.rows() != d_ * d_ || m_.cols() != d_ * d_)
            throw DimensionMismatch(static_cast<long>(m_.rows()), static_cast<long>(d_ * d_));
    }

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index hilbert_dim() const noexcept { return d_; }

    Vector apply(const Vector& v) const { return m_ * v; }

    Matrix apply(const Matrix& x) const {
        if (x.rows() != d_ || x.cols() != d_)
            throw DimensionMismatch(static_cast<long>(x.rows()), static_cast<long>(d_));
        return unvectorize(m_ * vectorize(x), d_);
    }

private:
    Matrix m_;
    Eigen::Index d_;
};

using Liouvillian = LiouvillianT<double>;

// L vec(rho) = vec(-i[H, rho] + sum_k rate_k D[o_k] rho).
template <typename Real>
LiouvillianT<Real> build_liouvillian(const OperatorMatrix<Real>& h,
                                     std::span<const CollapseChannel<Real>> channels) {
    using Matrix = ComplexMatrix<Real>;
    const Eigen::Index d = h.rows();
    if (h.cols() != d) throw InvalidArgument("Hamiltonian is not square");
    // L = I (x) K + conj(K) (x) I + sum rate conj(o) (x) o with K = -iH - sum rate o^dag o / 2.
    Matrix k = Complex<Real>(Real(0), Real(-1)) * h;
    for (const auto& c : channels) {
        if (c.op.rows() != d || c.op.cols() != d)
            throw DimensionMismatch(static_cast<long>(c.op.rows()), static_cast<long>(d));
        if (c.rate != 0.0) k -= Real(0.5) * Real(c.rate) * (c.op.adjoint() * c.op);
    }
    Matrix l = Matrix::Zero(d * d, d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        l.block(j * d, j * d, d, d) += k;
        for (Eigen::Index i = 0; i < d; ++i)
            if (k(i, j) != Complex<Real>(0)) l.block(i * d, j * d, d, d).diagonal().array() += std::conj(k(i, j));
    }
    for (const auto& c : channels) {
        if (c.rate == 0.0) continue;
        const Real rate(c.rate);
        for (Eigen::Index j = 0; j < d; ++j)
            for (Eigen::Index i = 0; i < d; ++i)
                if (c.op(i, j) != Complex<Real>(0)) l.block(i * d, j * d, d, d) += (rate * std::conj(c.op(i, j))) * c.op;
    }
    return LiouvillianT<Real>(std::move(l), d);
}

template <typename Real = double>
LiouvillianT<Real> build_liouvillian(const SystemParams& p, const HilbertSpec& spec) {
    const auto channels = collapse_operators<Real>(p, spec);
    return build_liouvillian<Real>(build_h_eff<Real>(p, spec),
                                   std::span<const CollapseChannel<Real>>(channels));
}

// ---------------------------------------------------------------------------
// Steady state

struct SteadyStateOptions {
    double residual_tolerance = 1e-10;  // ||L vec(rho)|| / ||L||_F
    double singular_rcond = 1e-13;      // below this the null space is taken as > 1-dimensional
    StateTolerances state = {};
};

template <typename Real>
struct SteadyStateReport {
    DensityMatrixT<Real> state;
    double residual;
    double rcond;
};

// Solve L x = 0 with one row replaced by Tr(x) = 1, dense LU plus one step
// of iterative refinement. The result is Hermitised and trace-renormalised.
template <typename Real>
SteadyStateReport<Real> steady_state_report(const LiouvillianT<Real>& L, const SteadyStateOptions& opt = {}) {
    using Matrix = ComplexMatrix<Real>;
    using Vector = ComplexVector<Real>;
    const Eigen::Index d = L.hilbert_dim();
    const Eigen::Index n = d * d;

    Matrix a = L.matrix();
    a.row(0).setZero();
    for (Eigen::Index i = 0; i < d; ++i) a(0, i + i * d) = Real(1);
    Vector b = Vector::Zero(n);
    b(0) = Real(1);

    Eigen::PartialPivLU<Matrix> lu(a);
    // The rcond estimate alone can miss exact zero pivots.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double rcond =
        std::min(static_cast<double>(lu.rcond()), static_cast<double>(pivots.minCoeff() / pivots.maxCoeff()));
    if (!(rcond > opt.singular_rcond)) throw NonUniqueSteadyState(rcond);

    Vector x = lu.solve(b);
    const Vector r = b - a * x;
    x += lu.solve(r);
    if (!x.allFinite()) throw NonUniqueSteadyState(rcond);

    Matrix rho = unvectorize(x, d);
    rho = (rho + rho.adjoint()).eval() / Real(2);
    rho /= rho.trace().real();

    const Real lnorm = L.matrix().norm();
    const double residual =
        lnorm > Real(0) ? static_cast<double>((L.matrix() * vectorize(rho)).norm() / lnorm) : 0.0;
    if (!(residual < opt.residual_tolerance)) throw ResidualTooLarge(residual, opt.residual_tolerance);

    try {
        return {DensityMatrixT<Real>::from_matrix(std::move(rho), opt.state), residual, rcond};
    } catch (const InvalidState& e) {
        throw SolverError(std::string("steady state failed validation: ") + e.what());
    }
}

template <typename Real>
DensityMatrixT<Real> steady_state(const LiouvillianT<Real>& L, const SteadyStateOptions& opt = {}) {
    return steady_state_report(L, opt).state;
}

// ---------------------------------------------------------------------------
// Time propagation

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double min_step = 1e-14;         // relative to the current time scale
    long max_steps = 50'000'000;
};

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
struct Dopri5 {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b_hat
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <typename Real>
Real error_norm(const ComplexVector<Real>& err, const ComplexVector<Real>& y0, const ComplexVector<Real>& y1,
                Real atol, Real rtol) {
    Real acc = 0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const Real scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const Real e = std::abs(err(i)) / scale;
        acc += e * e;
    }
    return std::sqrt(acc / Real(err.size()));
}

}  // namespace detail

// Integrates dy/dt = L y from t = 0 with adaptive Dormand-Prince 5(4) steps,
// landing exactly on each requested time. Times must be sorted and >= 0.
// No renormalisation of any kind; y may be any vectorised operator.
template <typename Real>
std::vector<ComplexVector<Real>> propagate(const LiouvillianT<Real>& L, const ComplexVector<Real>& y0,
                                           std::span<const double> times, const IntegratorOptions& opt = {},
                                           IntegrationStats* stats = nullptr) {
    using Vector = ComplexVector<Real>;
    using T = detail::Dopri5;
    const auto& A = L.matrix();
    if (y0.size() != A.cols()) throw DimensionMismatch(static_cast<long>(y0.size()), static_cast<long>(A.cols()));
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw InvalidArgument("times must be finite and >= 0");
        if (i > 0 && times[i] < times[i - 1]) throw InvalidArgument("times must be sorted ascending");
    }

    const Real rtol(opt.rtol), atol(opt.atol);
    std::vector<Vector> out;
    out.reserve(times.size());

    Vector y = y0;
    Real t = 0;
    Vector k1 = A * y;

    // Initial step from the generator scale.
    const Real anorm = A.cwiseAbs().rowwise().sum().maxCoeff();
    Real h = anorm > Real(0) ? Real(0.01) / anorm : Real(1);
    IntegrationStats local;

    Vector k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    for (double target_d : times) {
        const Real target(target_d);
        while (t < target) {
            if (local.accepted + local.rejected > opt.max_steps) throw StepSizeUnderflow(static_cast<double>(t));
            bool last = false;
            Real step = h;
            if (t + step >= target) {
                step = target - t;
                last = true;
            }
            if (step < Real(opt.min_step) * std::max(Real(1), std::abs(t)) && !last)
                throw StepSizeUnderflow(static_cast<double>(t));

            ytmp = y + step * (Real(T::a21) * k1);
            k2 = A * ytmp;
            ytmp = y + step * (Real(T::a31) * k1 + Real(T::a32) * k2);
            k3 = A * ytmp;
            ytmp = y + step * (Real(T::a41) * k1 + Real(T::a42) * k2 + Real(T::a43) * k3);
            k4 = A * ytmp;
            ytmp = y + step * (Real(T::a51) * k1 + Real(T::a52) * k2 + Real(T::a53) * k3 + Real(T::a54) * k4);
            k5 = A * ytmp;
            ytmp = y + step * (Real(T::a61) * k1 + Real(T::a62) * k2 + Real(T::a63) * k3 + Real(T::a64) * k4 +
                               Real(T::a65) * k5);
            k6 = A * ytmp;
            ynew = y + step * (Real(T::b1) * k1 + Real(T::b3) * k3 + Real(T::b4) * k4 + Real(T::b5) * k5 +
                               Real(T::b6) * k6);
            k7 = A * ynew;
            err = step * (Real(T::e1) * k1 + Real(T::e3) * k3 + Real(T::e4) * k4 + Real(T::e5) * k5 +
                          Real(T::e6) * k6 + Real(T::e7) * k7);

            const Real en = detail::error_norm<Real>(err, y, ynew, atol, rtol);
            if (!std::isfinite(static_cast<double>(en))) throw StepSizeUnderflow(static_cast<double>(t));
            const Real factor =
                en > Real(0) ? std::clamp(Real(0.9) * std::pow(en, Real(-0.2)), Real(0.2), Real(5)) : Real(5);
            if (en <= Real(1)) {
                t = last ? target : t + step;
                y.swap(ynew);
                k1.swap(k7);
                ++local.accepted;
                if (!last || factor < Real(1)) h = step * factor;
            } else {
                ++local.rejected;
                h = step * std::min(factor, Real(1));
                if (h < Real(opt.min_step) * std::max(Real(1), std::abs(t)))
                    throw StepSizeUnderflow(static_cast<double>(t));
            }
        }
        out.push_back(y);
    }
    if (stats) *stats = local;
    return out;
}

template <typename Real>
struct EvolveResult {
    std::vector<DensityMatrixT<Real>> states;
    std::vector<double> trace_drift;  // |Tr rho(t) - 1| before any renormalisation
    std::vector<bool> renormalized;
    IntegrationStats stats;
};

struct EvolveOptions {
    IntegratorOptions integrator = {};
    double renormalize_threshold = 1e-9;
};

// rho(t_i) from rho0. A state is trace-renormalised only when its drift
// exceeds the threshold, and the drift is always reported.
template <typename Real>
EvolveResult<Real> evolve(const LiouvillianT<Real>& L, const DensityMatrixT<Real>& rho0,
                          std::span<const double> times, const EvolveOptions& opt = {}) {
    if (rho0.dim() != L.hilbert_dim())
        throw DimensionMismatch(rho0.dim(), static_cast<long>(L.hilbert_dim()));
    EvolveResult<Real> res;
    const auto raw = propagate<Real>(L, vectorize(rho0.matrix()), times, opt.integrator, &res.stats);
    for (const auto& v : raw) {
        ComplexMatrix<Real> rho = unvectorize(v, L.hilbert_dim());
        const Complex<Real> tr = rho.trace();
        const double drift = static_cast<double>(std::abs(tr - Complex<Real>(1)));
        const bool fix = drift > opt.renormalize_threshold;
        if (fix) rho /= tr;
        res.trace_drift.push_back(drift);
        res.renormalized.push_back(fix);
        res.states.push_back(DensityMatrixT<Real>::unchecked(std::move(rho)));
    }
    return res;
}

}  // namespace magblock
