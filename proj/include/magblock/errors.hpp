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

#include <stdexcept>
#include <string>

namespace magblock {

// Root of everything the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad parameters, grids or shapes. Caller's fault.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    DimensionMismatch(long lhs, long rhs)
        : InvalidArgument("incompatible spaces: dimension " + std::to_string(lhs) +
                          " vs " + std::to_string(rhs)) {}
};

// A matrix that was supposed to be a density matrix is not one.
class InvalidState : public Error {
public:
    using Error::Error;
};

// Numerical failures of the master-equation solvers.
class SolverError : public Error {
public:
    using Error::Error;
};

class NonUniqueSteadyState : public SolverError {
public:
    explicit NonUniqueSteadyState(double rcond)
        : SolverError("non-unique steady state: augmented Liouvillian is singular (rcond=" +
                      std::to_string(rcond) + ")"),
          rcond_(rcond) {}
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

class ResidualTooLarge : public SolverError {
public:
    ResidualTooLarge(double residual, double tolerance)
        : SolverError("steady-state residual " + std::to_string(residual) +
                      " exceeds tolerance " + std::to_string(tolerance)),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class StepSizeUnderflow : public SolverError {
public:
    explicit StepSizeUnderflow(double t)
        : SolverError("step size underflow at t=" + std::to_string(t)), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

// <m^dag m> is too small for a normalised correlation to mean anything.
class VacuumState : public Error {
public:
    explicit VacuumState(double occupation)
        : Error("vacuum-dominated state: <m^dag m> = " + std::to_string(occupation) +
                " is below the correlation floor"),
          occupation_(occupation) {}
    double occupation() const noexcept { return occupation_; }

private:
    double occupation_;
};

// The closed-form amplitudes divide by a vanishing factor.
class AnalyticSingularity : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace magblock
