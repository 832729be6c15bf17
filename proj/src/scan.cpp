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

#include "magblock/scan.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "magblock/analytic.hpp"
#include "magblock/io.hpp"

namespace magblock {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double clamped_log10(double g2) {
    if (std::isnan(g2)) return kNaN;
    return std::log10(std::max(g2, kLog10Floor));
}

std::string list_string(std::span<const double> values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ',';
        s += format_double(values[i]);
    }
    return s;
}

int resolve_workers(int requested) { return requested > 0 ? requested : default_worker_count(); }

ScanMetadata base_metadata(ScanKind kind, const SystemParams& p, int n_max, bool analytic, int workers,
                           const SteadyStateOptions& steady) {
    ScanMetadata m;
    m.kind = kind;
    m.params = p;
    m.n_max = n_max;
    m.include_analytic = analytic;
    m.residual_tolerance = steady.residual_tolerance;
    m.workers = workers;
    return m;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::vector<double> Axis::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = value(i);
    return v;
}

void Axis::validate(const char* name) const {
    if (count < 2) throw InvalidArgument(std::string(name) + " axis needs count >= 2");
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
        throw InvalidArgument(std::string(name) + " axis needs finite min < max");
}

const char* to_string(ScanKind kind) {
    switch (kind) {
        case ScanKind::grid: return "grid";
        case ScanKind::line: return "line";
        case ScanKind::thermal: return "thermal";
        case ScanKind::g2t: return "g2t";
    }
    return "unknown";
}

ScanKind scan_kind_from_string(const std::string& s) {
    if (s == "grid") return ScanKind::grid;
    if (s == "line") return ScanKind::line;
    if (s == "thermal") return ScanKind::thermal;
    if (s == "g2t") return ScanKind::g2t;
    throw InvalidArgument("unknown scan kind '" + s + "'");
}

double ScanRow::log10_g2() const { return clamped_log10(g2); }
double TracePoint::log10_g2() const { return clamped_log10(g2); }

std::size_t ScanResult::failures() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ScanRow& r) { return !r.error.empty(); }));
}

int default_worker_count() {
    if (const char* env = std::getenv("MAGBLOCK_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    }
    if (first_error) std::rethrow_exception(first_error);
}

ScanRow evaluate_point(const SystemParams& p, const HilbertSpec& spec, bool include_analytic,
                       const SteadyStateOptions& steady) {
    ScanRow row;
    row.delta = p.delta;
    row.delta_f = p.delta_f;
    row.n_th = p.n_th;
    row.g2 = kNaN;
    row.n_magnon = kNaN;
    try {
        validate(p);
        const auto L = build_liouvillian<double>(p, spec);
        const auto rho = steady_state(L, steady);
        row.n_magnon = occupation(rho, spec).magnon;
        row.g2 = g2_zero(rho, spec);
    } catch (const Error& e) {
        row.error = e.what();
    }
    if (include_analytic) {
        try {
            row.g2_analytic = g2_analytic(p);
        } catch (const Error&) {
            row.g2_analytic = kNaN;
        }
    }
    return row;
}

ScanResult scan_g2_grid(const ScanGrid& grid, const ScanOptions& opt) {
    grid.delta.validate("delta");
    grid.delta_f.validate("delta_f");
    const HilbertSpec spec(grid.n_max);
    const int workers = resolve_workers(opt.workers);
    const auto start = Clock::now();

    ScanResult res;
    res.meta = base_metadata(ScanKind::grid, grid.fixed, grid.n_max, grid.include_analytic, workers, opt.steady);
    res.meta.delta_axis = format_axis(grid.delta);
    res.meta.delta_f_axis = format_axis(grid.delta_f);

    const auto nd = static_cast<std::size_t>(grid.delta.count);
    const auto nf = static_cast<std::size_t>(grid.delta_f.count);
    res.rows.resize(nd * nf);
    parallel_for(nd * nf, workers, [&](std::size_t k) {
        SystemParams p = grid.fixed;
        p.delta_f = grid.delta_f.value(static_cast<int>(k / nd));
        p.delta = grid.delta.value(static_cast<int>(k % nd));
        res.rows[k] = evaluate_point(p, spec, grid.include_analytic, opt.steady);
    });
    res.meta.wall_time_s = seconds_since(start);
    return res;
}

ScanResult scan_g2_line(const SystemParams& fixed, const Axis& delta, std::span<const double> delta_f_values,
                        int n_max, bool include_analytic, const ScanOptions& opt) {
    delta.validate("delta");
    for (double v : delta_f_values)
        if (!std::isfinite(v)) throw InvalidArgument("delta_f values must be finite");
    const HilbertSpec spec(n_max);
    const int workers = resolve_workers(opt.workers);
    const auto start = Clock::now();

    ScanResult res;
    res.meta = base_metadata(ScanKind::line, fixed, n_max, include_analytic, workers, opt.steady);
    res.meta.delta_axis = format_axis(delta);
    res.meta.delta_f_axis = list_string(delta_f_values);

    const auto nd = static_cast<std::size_t>(delta.count);
    res.rows.resize(nd * delta_f_values.size());
    parallel_for(res.rows.size(), workers, [&](std::size_t k) {
        SystemParams p = fixed;
        p.delta_f = delta_f_values[k / nd];
        p.delta = delta.value(static_cast<int>(k % nd));
        res.rows[k] = evaluate_point(p, spec, include_analytic, opt.steady);
    });
    res.meta.wall_time_s = seconds_since(start);
    return res;
}

ScanResult thermal_scan(const SystemParams& fixed, std::span<const double> n_th_values, int n_max,
                        bool include_analytic, const ScanOptions& opt) {
    for (double v : n_th_values)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("n_th values must be finite and >= 0");
    const HilbertSpec spec(n_max);
    const int workers = resolve_workers(opt.workers);
    const auto start = Clock::now();

    ScanResult res;
    res.meta = base_metadata(ScanKind::thermal, fixed, n_max, include_analytic, workers, opt.steady);
    res.rows.resize(n_th_values.size());
    parallel_for(res.rows.size(), workers, [&](std::size_t k) {
        SystemParams p = fixed;
        p.n_th = n_th_values[k];
        res.rows[k] = evaluate_point(p, spec, include_analytic, opt.steady);
    });
    res.meta.wall_time_s = seconds_since(start);
    return res;
}

ScanResult g2t_trace(const SystemParams& fixed, std::span<const double> times, int n_max,
                     const CorrelationOptions& opt) {
    const HilbertSpec spec(n_max);
    const auto start = Clock::now();
    ScanResult res;
    res.meta = base_metadata(ScanKind::g2t, fixed, n_max, false, 1, opt.steady);
    res.meta.rtol = opt.integrator.rtol;
    res.meta.atol = opt.integrator.atol;

    const auto values = g2_tau<double>(fixed, spec, times, opt);
    res.trace.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) res.trace.push_back({times[i], values[i]});
    res.meta.wall_time_s = seconds_since(start);
    return res;
}

}  // namespace magblock
