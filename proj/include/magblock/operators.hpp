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

/*! \file operators.hpp
    \brief Operators on the truncated magnon Fock space tensored with a spin qubit.

    Basis ordering is magnon-major: the state |n, s> sits at index 2*n + s,
    where s = 0 is the spin ground state |g> and s = 1 the excited state |e>.
    This ordering is part of the public interface.

    Truncation is by projection: an operator acts and components above
    n_max are dropped. Nothing is rescaled.
 */

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "magblock/errors.hpp"

namespace magblock {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

// Dense operator on the magnon (x) spin space.
template <typename Real = double>
using OperatorMatrix = ComplexMatrix<Real>;

using Operator = OperatorMatrix<double>;

enum class Spin : int { ground = 0, excited = 1 };

class HilbertSpec {
public:
    static constexpr int kMinFock = 2;

    explicit HilbertSpec(int n_max) : n_max_(n_max) {
        if (n_max < kMinFock)
            throw InvalidArgument("n_max must be >= 2 so that two-magnon states are representable, got " +
                                  std::to_string(n_max));
    }

    int n_max() const noexcept { return n_max_; }
    int magnon_dim() const noexcept { return n_max_ + 1; }
    int dim() const noexcept { return 2 * (n_max_ + 1); }

    // Position of |fock, spin> in the magnon-major basis.
    int index(int fock, Spin spin) const {
        if (fock < 0 || fock > n_max_)
            throw InvalidArgument("Fock index " + std::to_string(fock) + " outside [0, " +
                                  std::to_string(n_max_) + "]");
        return 2 * fock + static_cast<int>(spin);
    }

    friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

private:
    int n_max_;
};

template <typename Real = double>
ComplexVector<Real> basis_state(const HilbertSpec& spec, int fock, Spin spin) {
    ComplexVector<Real> v = ComplexVector<Real>::Zero(spec.dim());
    v(spec.index(fock, spin)) = Real(1);
    return v;
}

template <typename Real = double>
OperatorMatrix<Real> identity(const HilbertSpec& spec) {
    return OperatorMatrix<Real>::Identity(spec.dim(), spec.dim());
}

// m (x) I_2 with <n-1|m|n> = sqrt(n).
template <typename Real = double>
OperatorMatrix<Real> annihilation(const HilbertSpec& spec) {
    OperatorMatrix<Real> m = OperatorMatrix<Real>::Zero(spec.dim(), spec.dim());
    for (int n = 1; n <= spec.n_max(); ++n) {
        const Real amp = std::sqrt(Real(n));
        for (Spin s : {Spin::ground, Spin::excited})
            m(spec.index(n - 1, s), spec.index(n, s)) = amp;
    }
    return m;
}

template <typename Real = double>
OperatorMatrix<Real> creation(const HilbertSpec& spec) {
    return annihilation<Real>(spec).adjoint();
}

// I_magnon (x) sigma_-, sigma_-|e> = |g>.
template <typename Real = double>
OperatorMatrix<Real> spin_lowering(const HilbertSpec& spec) {
    OperatorMatrix<Real> s = OperatorMatrix<Real>::Zero(spec.dim(), spec.dim());
    for (int n = 0; n <= spec.n_max(); ++n)
        s(spec.index(n, Spin::ground), spec.index(n, Spin::excited)) = Real(1);
    return s;
}

template <typename Real = double>
OperatorMatrix<Real> spin_raising(const HilbertSpec& spec) {
    return spin_lowering<Real>(spec).adjoint();
}

template <typename Real = double>
OperatorMatrix<Real> number_operator(const HilbertSpec& spec) {
    OperatorMatrix<Real> n = OperatorMatrix<Real>::Zero(spec.dim(), spec.dim());
    for (int f = 0; f <= spec.n_max(); ++f)
        for (Spin s : {Spin::ground, Spin::excited}) n(spec.index(f, s), spec.index(f, s)) = Real(f);
    return n;
}

template <typename Derived>
auto dagger(const Eigen::MatrixBase<Derived>& a) {
    return a.adjoint().eval();
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != a.cols()) throw InvalidArgument("operator is not square");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch(static_cast<long>(a.rows()), static_cast<long>(b.rows()));
}

// Tr(rho A) without forming the product.
template <typename DerivedA, typename DerivedR>
auto trace_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedR>& rho) {
    require_same_shape(a, rho);
    return (rho.transpose().array() * a.array()).sum();
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a * b - b * a).eval();
}

template <typename DerivedA, typename DerivedB>
auto anticommutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    return (a * b + b * a).eval();
}

}  // namespace magblock
