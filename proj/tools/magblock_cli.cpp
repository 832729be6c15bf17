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

// magblock command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 solver error, 3 I/O error.

#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magblock/analytic.hpp"
#include "magblock/io.hpp"
#include "magblock/scan.hpp"

namespace {

using namespace magblock;
using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kSolver = 2, kIo = 3 };

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Flags shared by every solver subcommand.
struct PhysicsFlags {
    double g = 20.0;
    double kappa = 0.5;
    double omega_m = 0.01;
    std::optional<double> omega_nv;
    std::optional<double> lambda;
    double n_th = 0.0;
    int n_max = kDefaultNMax;
    std::optional<double> b_z;

    void attach(CLI::App* app) {
        app->add_option("--g", g, "spin-magnon coupling g/gamma")->capture_default_str();
        app->add_option("--kappa", kappa, "decay rate kappa/gamma (magnon and qubit)")->capture_default_str();
        app->add_option("--omega-m", omega_m, "magnon drive Omega_m/gamma")->capture_default_str();
        auto* onv = app->add_option("--omega-nv", omega_nv, "qubit drive Omega_NV/gamma (default 0)");
        auto* lam = app->add_option("--lambda", lambda, "drive ratio Omega_NV/Omega_m (needs --omega-m > 0)");
        onv->excludes(lam);
        app->add_option("--n-th", n_th, "thermal magnon occupation")->capture_default_str();
        app->add_option("--n-max", n_max, "highest retained magnon Fock state")->capture_default_str();
    }

    void attach_field(CLI::App* app, CLI::Option* delta_f_opt) {
        auto* bz = app->add_option("--b-z", b_z, "magnetic field in tesla; sets delta_f from the field");
        if (delta_f_opt) bz->excludes(delta_f_opt);
    }

    SystemParams params() const {
        SystemParams p;
        p.g = g;
        p.kappa = kappa;
        p.omega_m_drive = omega_m;
        p.omega_nv_drive = omega_nv.value_or(0.0);
        p.n_th = n_th;
        if (lambda) p = with_drive_ratio(p, *lambda);
        return p;
    }

    std::optional<double> field_delta_f() const {
        if (!b_z) return std::nullopt;
        PhysicalFieldParams f;
        f.b_z = *b_z;
        return to_gamma_units(field_to_detunings(f).delta_f);
    }
};

struct OutputFlags {
    std::string path;  // empty: stdout
    std::string format = "csv";
    int workers = 0;

    void attach(CLI::App* app, bool with_workers) {
        app->add_option("-o,--output", path, "output file (default: stdout)");
        app->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        if (with_workers)
            app->add_option("--workers", workers, "worker threads (default: $MAGBLOCK_WORKERS or all cores)");
    }

    void emit(const ScanResult& r) const {
        const auto fmt = output_format_from_string(format);
        if (path.empty() || path == "-") {
            if (fmt == OutputFormat::csv) write_csv(r, std::cout);
            else write_json(r, std::cout);
            return;
        }
        write_result_file(r, path, fmt);
        std::cerr << "wrote " << (r.meta.kind == ScanKind::g2t ? r.trace.size() : r.rows.size()) << " records to "
                  << path << " in " << r.meta.wall_time_s << " s\n";
    }
};

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

int run_point(const PhysicsFlags& phys, double delta, double delta_f, const std::string& format) {
    SystemParams p = phys.params();
    p.delta = delta;
    p.delta_f = phys.field_delta_f().value_or(delta_f);
    validate(p);  // usage error on bad parameters, before any solve

    const HilbertSpec spec(phys.n_max);
    const auto L = build_liouvillian<double>(p, spec);
    const auto rho = steady_state(L);
    const auto occ = occupation(rho, spec);
    double g2 = kNaN;
    std::string note;
    try {
        g2 = g2_zero(rho, spec);
    } catch (const VacuumState& e) {
        note = e.what();
    }
    double g2a = kNaN;
    try {
        g2a = g2_analytic(p);
    } catch (const Error&) {
    }

    if (format == "json") {
        json j = {{"g", p.g},
                  {"kappa", p.kappa},
                  {"delta", p.delta},
                  {"delta_f", p.delta_f},
                  {"omega_m", p.omega_m_drive},
                  {"omega_nv", p.omega_nv_drive},
                  {"n_th", p.n_th},
                  {"n_max", phys.n_max},
                  {"g2", number_or_null(g2)},
                  {"g2_analytic", number_or_null(g2a)},
                  {"n_magnon", occ.magnon},
                  {"n_qubit", occ.qubit}};
        if (!note.empty()) j["note"] = note;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "delta,delta_f,g2,g2_analytic,n_magnon,n_qubit\n"
                  << format_double(p.delta) << ',' << format_double(p.delta_f) << ',' << format_double(g2) << ','
                  << format_double(g2a) << ',' << format_double(occ.magnon) << ',' << format_double(occ.qubit)
                  << '\n';
    }
    return kOk;
}

void print_solution(std::vector<std::vector<std::string>>& table, const std::string& name,
                    const ConditionSolution& s, double delta_f) {
    const char* regime = s.regime == Regime::real_pair    ? "real_pair"
                         : s.regime == Regime::degenerate ? "degenerate"
                                                          : "no_real_solution";
    if (s.roots.empty()) table.push_back({name, "0", "nan", format_double(delta_f), "false", regime});
    for (std::size_t i = 0; i < s.roots.size(); ++i)
        table.push_back({name, std::to_string(i + 1), format_double(s.roots[i]), format_double(delta_f), "true", regime});
}

int run_conditions(double g, double kappa, std::optional<double> lambda, std::optional<double> delta_f_opt,
                   std::optional<double> b_z, const std::string& format) {
    std::optional<double> field_df;
    if (b_z) {
        PhysicalFieldParams f;
        f.b_z = *b_z;
        field_df = to_gamma_units(field_to_detunings(f).delta_f);
    }
    const double delta_f = field_df.value_or(delta_f_opt.value_or(0.0));

    // quantity,index,delta,delta_f,exists,note
    std::vector<std::vector<std::string>> table;
    if (field_df) table.push_back({"field_delta_f", "0", "nan", format_double(*field_df), "true", "from_b_z"});
    print_solution(table, "cmb", cmb_condition(g, delta_f), delta_f);
    const auto umb = umb_condition_single(g, delta_f, kappa);
    print_solution(table, "umb_single", umb.lossless, delta_f);
    if (umb.finite_kappa) {
        int i = 0;
        for (const auto& pt : umb.finite_kappa->points)
            table.push_back({"umb_finite_kappa", std::to_string(++i), format_double(pt.delta),
                             format_double(pt.delta_f), "true", umb.finite_kappa->degenerate ? "degenerate" : "pair"});
    } else {
        table.push_back({"umb_finite_kappa", "0", "nan", "nan", "false", "2g^2<kappa^2"});
    }
    if (lambda) {
        print_solution(table, "umb_double", umb_condition_double(g, delta_f, *lambda), delta_f);
        if (g > 0.0 && *lambda > 0.0) {
            for (const auto& ip : intersection_points(g, *lambda)) {
                // Delta of an intersection lies on the CMB branch picked by the UMB lower root.
                double delta = kNaN;
                if (ip.exists) {
                    const auto u = umb_condition_double(g, ip.delta_f, *lambda);
                    if (!u.roots.empty()) delta = u.roots.front();
                }
                table.push_back({"intersection", std::to_string(ip.index), format_double(delta),
                                 format_double(ip.delta_f), ip.exists ? "true" : "false", ""});
            }
        }
    }

    if (format == "json") {
        json rows = json::array();
        for (const auto& r : table) {
            const double d = parse_double(r[2]);
            const double df = parse_double(r[3]);
            rows.push_back({{"quantity", r[0]},
                            {"index", std::stoi(r[1])},
                            {"delta", number_or_null(d)},
                            {"delta_f", number_or_null(df)},
                            {"exists", r[4] == "true"},
                            {"note", r[5]}});
        }
        json doc = {{"g", g}, {"kappa", kappa}, {"delta_f", delta_f}, {"rows", rows}};
        if (lambda) doc["lambda"] = *lambda;
        std::cout << doc.dump(1) << '\n';
    } else {
        std::cout << "quantity,index,delta,delta_f,exists,note\n";
        for (const auto& r : table)
            std::cout << r[0] << ',' << r[1] << ',' << r[2] << ',' << r[3] << ',' << r[4] << ',' << r[5] << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"magblock: magnon statistics of a driven spin-magnon system"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    // point
    auto* point = app.add_subcommand("point", "steady-state g2(0), closed-form g2(0) and occupations at one point");
    PhysicsFlags point_phys;
    double point_delta = 0.0, point_delta_f = 0.0;
    std::string point_format = "json";
    point_phys.attach(point);
    point->add_option("--delta", point_delta, "drive detuning Delta/gamma")->capture_default_str();
    auto* point_df = point->add_option("--delta-f", point_delta_f, "half frequency detuning Delta_F/gamma")
                         ->capture_default_str();
    point_phys.attach_field(point, point_df);
    point->add_option("--format", point_format, "json or csv")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    // scan
    auto* scan = app.add_subcommand("scan", "g2(0) over a Delta x Delta_F grid");
    PhysicsFlags scan_phys;
    OutputFlags scan_out;
    std::string scan_delta = "-60:60:201", scan_delta_f = "-60:60:201";
    bool scan_analytic = false;
    scan_phys.attach(scan);
    scan_out.attach(scan, true);
    scan->add_option("--delta", scan_delta, "Delta axis min:max:count")->capture_default_str();
    scan->add_option("--delta-f", scan_delta_f, "Delta_F axis min:max:count")->capture_default_str();
    scan->add_flag("--analytic", scan_analytic, "add the closed-form g2(0) column");

    // line
    auto* line = app.add_subcommand("line", "g2(0) versus Delta for a list of Delta_F values");
    PhysicsFlags line_phys;
    OutputFlags line_out;
    std::string line_delta = "-60:60:1201", line_delta_f = "0,20,40";
    bool line_analytic = false;
    line_phys.attach(line);
    line_out.attach(line, true);
    line->add_option("--delta", line_delta, "Delta axis min:max:count")->capture_default_str();
    line->add_option("--delta-f", line_delta_f, "comma-separated Delta_F values")->capture_default_str();
    line->add_flag("--analytic", line_analytic, "add the closed-form g2(0) column");

    // thermal
    auto* thermal = app.add_subcommand("thermal", "g2(0) versus thermal occupation at one point");
    PhysicsFlags thermal_phys;
    OutputFlags thermal_out;
    double thermal_delta = 0.0, thermal_delta_f = 0.0;
    std::string thermal_values = "0,1e-4,1e-3,1e-2,0.1,1";
    bool thermal_analytic = false;
    thermal_phys.attach(thermal);
    thermal_out.attach(thermal, true);
    thermal->add_option("--delta", thermal_delta, "Delta/gamma")->capture_default_str();
    auto* thermal_df = thermal->add_option("--delta-f", thermal_delta_f, "Delta_F/gamma")->capture_default_str();
    thermal_phys.attach_field(thermal, thermal_df);
    thermal->add_option("--n-th-values", thermal_values, "comma-separated thermal occupations")
        ->capture_default_str();
    thermal->add_flag("--analytic", thermal_analytic, "add the closed-form g2(0) column");

    // g2t
    auto* g2t = app.add_subcommand("g2t", "time-delayed g2(t) at one point (t in 1/gamma)");
    PhysicsFlags g2t_phys;
    OutputFlags g2t_out;
    double g2t_delta = 0.0, g2t_delta_f = 0.0;
    std::string g2t_times = "0:10:501";
    g2t_phys.attach(g2t);
    g2t_out.attach(g2t, false);
    g2t->add_option("--delta", g2t_delta, "Delta/gamma")->capture_default_str();
    auto* g2t_df = g2t->add_option("--delta-f", g2t_delta_f, "Delta_F/gamma")->capture_default_str();
    g2t_phys.attach_field(g2t, g2t_df);
    g2t->add_option("--t", g2t_times, "time axis min:max:count")->capture_default_str();

    // conditions
    auto* cond = app.add_subcommand("conditions", "blockade loci and CMB/UMB intersection points");
    double cond_g = 20.0, cond_kappa = 0.5;
    std::optional<double> cond_lambda, cond_delta_f, cond_bz;
    std::string cond_format = "csv";
    cond->add_option("--g", cond_g, "coupling g/gamma")->capture_default_str();
    cond->add_option("--kappa", cond_kappa, "decay rate kappa/gamma")->capture_default_str();
    cond->add_option("--lambda", cond_lambda, "drive ratio Omega_NV/Omega_m");
    auto* cond_df = cond->add_option("--delta-f", cond_delta_f, "Delta_F/gamma (default 0)");
    cond->add_option("--b-z", cond_bz, "magnetic field in tesla; sets Delta_F")->excludes(cond_df);
    cond->add_option("--format", cond_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*point) return run_point(point_phys, point_delta, point_delta_f, point_format);

        if (*scan) {
            ScanGrid grid;
            grid.delta = parse_axis(scan_delta);
            grid.delta_f = parse_axis(scan_delta_f);
            grid.fixed = scan_phys.params();
            validate(grid.fixed);
            grid.n_max = scan_phys.n_max;
            grid.include_analytic = scan_analytic;
            scan_out.emit(scan_g2_grid(grid, {scan_out.workers, {}}));
            return kOk;
        }
        if (*line) {
            const SystemParams p = line_phys.params();
            validate(p);
            const auto dfs = parse_list(line_delta_f);
            line_out.emit(scan_g2_line(p, parse_axis(line_delta), dfs, line_phys.n_max, line_analytic,
                                       {line_out.workers, {}}));
            return kOk;
        }
        if (*thermal) {
            SystemParams p = thermal_phys.params();
            p.delta = thermal_delta;
            p.delta_f = thermal_phys.field_delta_f().value_or(thermal_delta_f);
            validate(p);
            const auto values = parse_list(thermal_values);
            thermal_out.emit(
                thermal_scan(p, values, thermal_phys.n_max, thermal_analytic, {thermal_out.workers, {}}));
            return kOk;
        }
        if (*g2t) {
            SystemParams p = g2t_phys.params();
            p.delta = g2t_delta;
            p.delta_f = g2t_phys.field_delta_f().value_or(g2t_delta_f);
            validate(p);
            const Axis t = parse_axis(g2t_times);
            if (t.min < 0.0) throw InvalidArgument("times must be >= 0");
            const auto times = t.values();
            g2t_out.emit(g2t_trace(p, times, g2t_phys.n_max));
            return kOk;
        }
        if (*cond) return run_conditions(cond_g, cond_kappa, cond_lambda, cond_delta_f, cond_bz, cond_format);
    } catch (const IoError& e) {
        std::cerr << "magblock: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const InvalidArgument& e) {
        std::cerr << "magblock: invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "magblock: solver error: " << e.what() << '\n';
        return kSolver;
    }
    return kUsage;
}
