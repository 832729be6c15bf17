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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "magblock/operators.hpp"

namespace magblock {

struct StateTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-10;
    double min_eigenvalue = -1e-8;
};

template <typename Real>
Real hermiticity_defect(const ComplexMatrix<Real>& a) {
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
Real min_eigenvalue(const ComplexMatrix<Real>& hermitian) {
    const ComplexMatrix<Real> h = (hermitian + hermitian.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

// Hermitian, unit-trace, positive semidefinite state on a HilbertSpec.
template <typename Real = double>
class DensityMatrixT {
public:
    using Matrix = ComplexMatrix<Real>;

    // Validates against `tol`; throws InvalidState on violation.
    static DensityMatrixT from_matrix(Matrix m, const StateTolerances& tol = {}) {
        if (m.rows() != m.cols()) throw InvalidState("density matrix is not square");
        const Real herm = magblock::hermiticity_defect<Real>(m);
        if (!(herm <= Real(tol.hermiticity))) {
            std::ostringstream os;
            os << "density matrix is not Hermitian (defect " << double(herm) << ")";
            throw InvalidState(os.str());
        }
        const Complex<Real> tr = m.trace();
        if (!(std::abs(tr - Complex<Real>(1)) <= Real(tol.trace))) {
            std::ostringstream os;
            os << "density matrix trace is " << double(tr.real()) << "+" << double(tr.imag()) << "i";
            throw InvalidState(os.str());
        }
        const Real lo = magblock::min_eigenvalue<Real>(m);
        if (!(lo >= Real(tol.min_eigenvalue))) {
            std::ostringstream os;
            os << "density matrix has negative eigenvalue " << double(lo);
            throw InvalidState(os.str());
        }
        return DensityMatrixT(std::move(m));
    }

    // No checks. For solver intermediates whose invariants are reported separately.
    static DensityMatrixT unchecked(Matrix m) { return DensityMatrixT(std::move(m)); }

    static DensityMatrixT pure(const ComplexVector<Real>& psi) {
        const ComplexVector<Real> v = psi / psi.norm();
        return DensityMatrixT(v * v.adjoint());
    }

    static DensityMatrixT basis(const HilbertSpec& spec, int fock, Spin spin) {
        return pure(basis_state<Real>(spec, fock, spin));
    }

    static DensityMatrixT vacuum(const HilbertSpec& spec) { return basis(spec, 0, Spin::ground); }

    const Matrix& matrix() const noexcept { return m_; }
    long dim() const noexcept { return static_cast<long>(m_.rows()); }
    Complex<Real> trace() const { return m_.trace(); }
    Real min_eigenvalue() const { return magblock::min_eigenvalue<Real>(m_); }
    Real hermiticity_defect() const { return magblock::hermiticity_defect<Real>(m_); }

private:
    explicit DensityMatrixT(Matrix m) : m_(std::move(m)) {}
    Matrix m_;
};

using DensityMatrix = DensityMatrixT<double>;

// Tr(rho A).
template <typename Real, typename Derived>
Complex<Real> expectation(const Eigen::MatrixBase<Derived>& a, const DensityMatrixT<Real>& rho) {
    return trace_product(a, rho.matrix());
}

}  // namespace magblock
