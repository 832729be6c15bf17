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


// Acceptance suite. Prints one PASS/FAIL line per criterion. With numeric
// arguments only the listed criteria run. Exit status is the failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "magblock/analytic.hpp"
#include "magblock/io.hpp"
#include "magblock/scan.hpp"

using namespace magblock;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SystemParams reference_params() {
    SystemParams p;
    p.g = 20;
    p.kappa = 0.5;
    p.omega_m_drive = 0.01;
    return p;
}

struct Named {
    const char* name;
    SystemParams p;
};

// CMB, UMB and combined blockade points at g = 20, lambda = 4.
std::vector<Named> blockade_points() {
    auto cmb = with_drive_ratio(reference_params(), 4);
    cmb.delta = 20;
    cmb.delta_f = 0;
    auto umb = with_drive_ratio(reference_params(), 4);
    umb.delta = 24.8;
    umb.delta_f = 0;
    auto both = with_drive_ratio(reference_params(), 4);
    both.delta = 22.8;
    both.delta_f = 11.2;
    return {{"CMB", cmb}, {"UMB", umb}, {"CMB+UMB", both}};
}

double numeric_g2(const SystemParams& p, int n_max) {
    const HilbertSpec spec(n_max);
    return g2_zero(steady_state(build_liouvillian<double>(p, spec)), spec);
}

// Random oracle tuples shared by criteria 1, 9 and 10.
std::vector<SystemParams> oracle_tuples(std::size_t count) {
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> gd(0.5, 20.0), det(-60.0, 60.0);
    std::bernoulli_distribution coin(0.5);
    std::vector<SystemParams> out;
    while (out.size() < count) {
        auto p = reference_params();
        p.g = gd(rng);
        p.delta = det(rng);
        p.delta_f = det(rng);
        p.omega_nv_drive = coin(rng) ? 4 * p.omega_m_drive : 0.0;
        if (singularity_distance(p) < 0.5) continue;
        out.push_back(p);
    }
    return out;
}

Outcome criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0, used = 0, skipped_small = 0;
    double worst = 0;
    for (const auto& p : oracle_tuples(400)) {
        if (used == 100) break;
        const double num = numeric_g2(p, kDefaultNMax);
        const double ana = g2_analytic(p);
        if (num < 1e-10 || ana < 1e-10) {
            ++skipped_small;
            continue;
        }
        ++used;
        const double d = std::abs(num - ana) / std::max(num, ana);
        worst = std::max(worst, d);
        if (d < 0.10) ++ok;
    }
    const double dt = seconds_since(t0);
    return {used == 100 && ok >= 95 && dt < 120,
            fmt("%d/%d points within 10%% (worst %.3g, %d below 1e-10 skipped), %.1f s", ok, used, worst,
                skipped_small, dt)};
}

Outcome criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = numeric_g2(blockade_points()[2].p, kDefaultNMax);
    const double dt = seconds_since(t0);
    return {v <= 1e-7 && dt < 5, fmt("g2(0) = %.4e, %.3f s", v, dt)};
}

Outcome criterion_3() {
    const auto a = intersection_points(20, 4);
    const auto b = intersection_points(20, 1);
    const bool ok_a = a[2].exists && std::abs(a[2].delta_f - 11.21) <= 0.01;
    const bool ok_b = b[0].exists && b[0].delta_f == 0.0 && !b[1].exists && !b[2].exists;
    return {ok_a && ok_b, fmt("lambda=4: DF(3) = %.6f; lambda=1: DF(1) = %g, pair exists = %d", a[2].delta_f,
                              b[0].delta_f, int(b[1].exists || b[2].exists))};
}

Outcome criterion_4() {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> g(0, 30), df(-60, 60), lam(0, 8);
    double worst_b = 0, worst_c = 0;
    int roots = 0;
    for (int i = 0; i < 2000; ++i) {
        const double gg = g(rng), dff = df(rng), l = lam(rng);
        for (double d : umb_condition_double(gg, dff, l).roots) {
            worst_b = std::max(worst_b, factor_magnitudes(gg, 0.0, d, dff, l).b_sq);
            ++roots;
        }
        for (double d : cmb_condition(gg, dff).roots) {
            worst_c = std::max(worst_c, std::abs(d * d - gg * gg - dff * dff));
            ++roots;
        }
    }
    return {worst_b < 1e-9 && worst_c < 1e-9,
            fmt("%d roots, max |B|^2 = %.2e, max |D^2-g^2-DF^2| = %.2e", roots, worst_b, worst_c)};
}

Outcome criterion_5() {
    auto coh = reference_params();
    coh.g = 0;
    coh.delta = 0;
    const double g2c = numeric_g2(coh, kDefaultNMax);

    auto th = reference_params();
    th.g = 0;
    th.omega_m_drive = 0;
    th.n_th = 0.5;
    const HilbertSpec spec(20);
    const auto rho = steady_state(build_liouvillian<double>(th, spec));
    const double g2t = g2_zero(rho, spec);
    const double n = occupation(rho, spec).magnon;
    return {std::abs(g2c - 1) < 1e-6 && std::abs(g2t - 2) < 1e-6 && std::abs(n - 0.5) < 1e-8,
            fmt("coherent g2 = %.9f, thermal g2 = %.9f, <n> = %.10f", g2c, g2t, n)};
}

std::vector<double> trace_times() {
    std::vector<double> t(801);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = 40.0 * double(i) / double(t.size() - 1);
    return t;
}

struct Trace {
    std::string name;
    double g2_zero_ss;
    std::vector<double> g2;
};

const std::vector<Trace>& blockade_traces() {
    static const std::vector<Trace> traces = [] {
        std::vector<Trace> out;
        const HilbertSpec spec(kDefaultNMax);
        const auto t = trace_times();
        for (const auto& s : blockade_points()) {
            const auto L = build_liouvillian<double>(s.p, spec);
            const auto rho = steady_state(L);
            out.push_back({s.name, g2_zero(rho, spec), g2_tau<double>(L, rho, spec, t)});
        }
        return out;
    }();
    return traces;
}

Outcome criterion_6() {
    bool pass = true;
    std::string detail;
    for (const auto& tr : blockade_traces()) {
        const double rel0 = std::abs(tr.g2.front() - tr.g2_zero_ss) / tr.g2_zero_ss;
        const double last = tr.g2.back();
        pass = pass && rel0 < 1e-8 && last >= 0.95 && last <= 1.05;
        detail += fmt("%s: rel|g2(0)-g2_ss| = %.1e, g2(40) = %.6f; ", tr.name.c_str(), rel0, last);
    }
    return {pass, detail};
}

Outcome criterion_7() {
    const auto& tr = blockade_traces();
    const auto max_of = [](const Trace& t) { return *std::max_element(t.g2.begin(), t.g2.end()); };
    const double umb_max = max_of(tr[1]);
    const double cmb_max = max_of(tr[0]);
    const double both_max = max_of(tr[2]);
    bool rising = true;
    for (std::size_t i = 1; i < tr[2].g2.size(); ++i) rising = rising && tr[2].g2[0] < tr[2].g2[i];
    return {umb_max > 1 && cmb_max <= 1.05 && both_max <= 1.05 && rising,
            fmt("max g2: UMB %.4f, CMB %.4f, CMB+UMB %.4f; CMB+UMB g2(0) < g2(t) for all t>0: %s", umb_max,
                cmb_max, both_max, rising ? "yes" : "no")};
}

Outcome criterion_8() {
    const std::vector<double> nth{0, 1e-4, 1e-3, 1e-2, 0.1, 1};
    const int n_max = 12;
    bool pass = true;
    std::string detail;
    for (const auto& s : blockade_points()) {
        const auto r = thermal_scan(s.p, nth, n_max, false, {.workers = 1});
        std::vector<double> v;
        for (const auto& row : r.rows) v.push_back(row.g2);
        bool mono = true;
        for (std::size_t i = 1; i < v.size(); ++i) mono = mono && v[i] >= v[i - 1];
        const auto in_band = [](double x) { return x >= 0.3 && x <= 3.0; };
        bool ok = mono;
        if (std::string(s.name) == "UMB") {
            ok = ok && in_band(v[2]);
        } else {
            ok = ok && v[2] < 0.3 && in_band(v[4]);
        }
        pass = pass && ok;
        detail += fmt("%s [%s]: %.3g %.3g %.3g %.3g %.3g %.3g%s; ", s.name, ok ? "ok" : "fail", v[0], v[1], v[2],
                      v[3], v[4], v[5], mono ? "" : " (not monotone)");
    }
    return {pass, detail};
}

Outcome criterion_9() {
    double worst_trace = 0, worst_eig = 0, worst_drift = 0;
    int states = 0;
    const HilbertSpec spec(kDefaultNMax);
    for (const auto& p : oracle_tuples(100)) {
        const auto rho = steady_state(build_liouvillian<double>(p, spec));
        worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
        worst_eig = std::min(worst_eig, rho.min_eigenvalue());
        ++states;
    }
    const auto t = trace_times();
    for (const auto& s : blockade_points()) {
        const auto L = build_liouvillian<double>(s.p, spec);
        const auto ev = evolve(L, DensityMatrix::vacuum(spec), t);
        for (std::size_t i = 0; i < ev.states.size(); ++i) {
            worst_drift = std::max(worst_drift, ev.trace_drift[i]);
            worst_eig = std::min(worst_eig, ev.states[i].min_eigenvalue());
        }
    }
    return {worst_trace < 1e-10 && worst_eig >= -1e-8 && worst_drift < 1e-9,
            fmt("%d steady states: max |tr-1| = %.1e; min eigenvalue %.1e; max evolved drift %.1e", states,
                worst_trace, worst_eig, worst_drift)};
}

Outcome criterion_10() {
    double worst = 0;
    int used = 0;
    for (const auto& p : oracle_tuples(20)) {
        const double a = numeric_g2(p, 6);
        const double b = numeric_g2(p, 10);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
        ++used;
    }
    return {worst < 1e-3, fmt("%d points, max relative change %.2e", used, worst)};
}

std::string data_section(const ScanResult& r) {
    std::ostringstream os;
    write_csv(r, os);
    std::istringstream is(os.str());
    std::string line, out;
    while (std::getline(is, line))
        if (line.empty() || line[0] != '#') out += line + '\n';
    return out;
}

Outcome criterion_11() {
    ScanGrid grid;
    grid.fixed = reference_params();
    const auto t0 = std::chrono::steady_clock::now();
    const auto serial = scan_g2_grid(grid, {.workers = 1});
    const double dt = seconds_since(t0);
    const auto parallel = scan_g2_grid(grid, {.workers = 4});
    const bool identical = data_section(serial) == data_section(parallel);

    // A row passes when a local minimum sits at most one grid index from the
    // grid point nearest the predicted dip.
    const int nd = grid.delta.count;
    const double step = grid.delta.step();
    int checked = 0, hit = 0;
    double worst_offset = 0;
    for (int j = 0; j < grid.delta_f.count; ++j) {
        const double df = grid.delta_f.value(j);
        const double target = std::sqrt(grid.fixed.g * grid.fixed.g + df * df);
        for (double sgn : {-1.0, 1.0}) {
            const double d0 = sgn * target;
            if (std::abs(d0) > grid.delta.max - 2 * step) continue;
            ++checked;
            const auto g2 = [&](int i) { return serial.rows[static_cast<std::size_t>(j) * nd + i].g2; };
            const int nearest = static_cast<int>(std::lround((d0 - grid.delta.min) / step));
            for (int i = std::max(1, nearest - 1); i <= std::min(nd - 2, nearest + 1); ++i) {
                if (g2(i) <= g2(i - 1) && g2(i) <= g2(i + 1)) {
                    ++hit;
                    worst_offset = std::max(worst_offset, std::abs(grid.delta.value(i) - d0) / step);
                    break;
                }
            }
        }
    }
    return {dt < 600 && identical && hit == checked && serial.failures() == 0,
            fmt("serial %.1f s; %d/%d dressed-state dips within one grid index (largest offset %.2f cells); "
                "parallel data identical: %s",
                dt, hit, checked, worst_offset, identical ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"analytic vs numeric agreement", criterion_1},
        {"headline antibunching value", criterion_2},
        {"intersection points", criterion_3},
        {"condition roots", criterion_4},
        {"coherent and thermal limits", criterion_5},
        {"regression theorem sanity", criterion_6},
        {"time-trace shapes", criterion_7},
        {"thermal degradation", criterion_8},
        {"physical-state invariants", criterion_9},
        {"truncation convergence", criterion_10},
        {"dip locus and determinism", criterion_11},
    };
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);

    int failures = 0;
    for (int k : which) {
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "no criterion %d\n", k);
            return 64;
        }
        const auto& [name, run] = criteria[k - 1];
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failures;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
