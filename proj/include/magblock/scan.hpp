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

/*! \file scan.hpp
    \brief Parameter sweeps of the steady-state magnon correlation.

    Every point is an independent steady-state solve. Points are farmed out to
    a pool of worker threads and written back by index, so the output order
    (and every bit of the data) does not depend on the worker count.

    An undefined correlation (vacuum state, failed solve) is stored as NaN and
    the reason is kept in ScanRow::error. A failing point never aborts a scan.
 */

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magblock/correlations.hpp"

namespace magblock {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kDefaultNMax = 6;
// log10 column clamp; raw g2 is stored unclamped.
inline constexpr double kLog10Floor = 1e-12;

// Evenly spaced values min..max inclusive.
struct Axis {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    double value(int i) const {
        return i == count - 1 ? max : min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    double step() const { return (max - min) / static_cast<double>(count - 1); }
    std::vector<double> values() const;
    void validate(const char* name) const;
};

struct ScanGrid {
    Axis delta{-60.0, 60.0, 201};
    Axis delta_f{-60.0, 60.0, 201};
    SystemParams fixed{};  // delta and delta_f are overwritten per point
    int n_max = kDefaultNMax;
    bool include_analytic = false;
};

struct ScanOptions {
    int workers = 0;  // 0: default_worker_count()
    SteadyStateOptions steady = {};
};

enum class ScanKind { grid, line, thermal, g2t };

const char* to_string(ScanKind kind);
ScanKind scan_kind_from_string(const std::string& s);

struct ScanRow {
    double delta = 0.0;
    double delta_f = 0.0;
    double n_th = 0.0;
    double g2 = 0.0;                     // NaN when undefined
    std::optional<double> g2_analytic;  // nullopt: not requested; NaN: singular
    double n_magnon = 0.0;
    std::string error;                   // empty on success

    double log10_g2() const;
};

struct TracePoint {
    double t = 0.0;
    double g2 = 0.0;
    double log10_g2() const;
};

struct ScanMetadata {
    ScanKind kind = ScanKind::grid;
    SystemParams params{};
    int n_max = kDefaultNMax;
    bool include_analytic = false;
    double residual_tolerance = SteadyStateOptions{}.residual_tolerance;
    double rtol = IntegratorOptions{}.rtol;
    double atol = IntegratorOptions{}.atol;
    int workers = 1;
    double wall_time_s = 0.0;
    std::string version = kVersion;
    std::string delta_axis;    // "min:max:count" or "" when fixed
    std::string delta_f_axis;  // "min:max:count", comma list, or ""
};

struct ScanResult {
    ScanMetadata meta;
    std::vector<ScanRow> rows;      // grid / line / thermal
    std::vector<TracePoint> trace;  // g2t

    std::size_t failures() const;
};

// MAGBLOCK_WORKERS when set and positive, else hardware concurrency.
int default_worker_count();

// Runs body(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

// Steady-state g2(0) and occupation at one point, failures captured in-row.
ScanRow evaluate_point(const SystemParams& p, const HilbertSpec& spec, bool include_analytic,
                       const SteadyStateOptions& steady = {});

// Rows ordered delta_f-major, delta ascending within each delta_f.
ScanResult scan_g2_grid(const ScanGrid& grid, const ScanOptions& opt = {});

// One Delta sweep per listed Delta_F value, in list order.
ScanResult scan_g2_line(const SystemParams& fixed, const Axis& delta, std::span<const double> delta_f_values,
                        int n_max = kDefaultNMax, bool include_analytic = false, const ScanOptions& opt = {});

// g2(0) at the fixed (Delta, Delta_F) for each thermal occupation.
ScanResult thermal_scan(const SystemParams& fixed, std::span<const double> n_th_values, int n_max = kDefaultNMax,
                        bool include_analytic = false, const ScanOptions& opt = {});

// g2(t) at the fixed point; times in units of 1/gamma. Solver errors propagate.
ScanResult g2t_trace(const SystemParams& fixed, std::span<const double> times, int n_max = kDefaultNMax,
                     const CorrelationOptions& opt = {});

}  // namespace magblock
