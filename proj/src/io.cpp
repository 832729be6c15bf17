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

#include "magblock/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

namespace magblock {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

// Errors may contain commas and newlines; keep them on one metadata line.
std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

std::vector<std::pair<std::string, std::string>> metadata_pairs(const ScanResult& r) {
    const auto& m = r.meta;
    const auto& p = m.params;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"format", "magblock-scan"},
        {"version", m.version},
        {"kind", to_string(m.kind)},
        {"g", format_double(p.g)},
        {"kappa", format_double(p.kappa)},
        {"delta", format_double(p.delta)},
        {"delta_f", format_double(p.delta_f)},
        {"omega_m", format_double(p.omega_m_drive)},
        {"omega_nv", format_double(p.omega_nv_drive)},
        {"lambda", p.omega_m_drive > 0.0 ? format_double(p.omega_nv_drive / p.omega_m_drive) : "nan"},
        {"n_th", format_double(p.n_th)},
        {"n_max", std::to_string(m.n_max)},
        {"include_analytic", m.include_analytic ? "true" : "false"},
        {"residual_tolerance", format_double(m.residual_tolerance)},
        {"rtol", format_double(m.rtol)},
        {"atol", format_double(m.atol)},
        {"delta_axis", m.delta_axis},
        {"delta_f_axis", m.delta_f_axis},
        {"units", "rates and detunings in gamma = 2pi x 1 MHz; t in 1/gamma"},
        {"undefined_token", "nan"},
        {"log10_floor", format_double(kLog10Floor)},
        {"workers", std::to_string(m.workers)},
        {"wall_time_s", format_double(m.wall_time_s)},
        {"failures", std::to_string(r.failures())},
    };
    return kv;
}

void apply_metadata(ScanMetadata& m, const std::string& key, const std::string& value) {
    auto& p = m.params;
    if (key == "version") m.version = value;
    else if (key == "kind") m.kind = scan_kind_from_string(value);
    else if (key == "g") p.g = parse_double(value);
    else if (key == "kappa") p.kappa = parse_double(value);
    else if (key == "delta") p.delta = parse_double(value);
    else if (key == "delta_f") p.delta_f = parse_double(value);
    else if (key == "omega_m") p.omega_m_drive = parse_double(value);
    else if (key == "omega_nv") p.omega_nv_drive = parse_double(value);
    else if (key == "n_th") p.n_th = parse_double(value);
    else if (key == "n_max") m.n_max = std::stoi(value);
    else if (key == "include_analytic") m.include_analytic = value == "true";
    else if (key == "residual_tolerance") m.residual_tolerance = parse_double(value);
    else if (key == "rtol") m.rtol = parse_double(value);
    else if (key == "atol") m.atol = parse_double(value);
    else if (key == "delta_axis") m.delta_axis = value;
    else if (key == "delta_f_axis") m.delta_f_axis = value;
    else if (key == "workers") m.workers = std::stoi(value);
    else if (key == "wall_time_s") m.wall_time_s = parse_double(value);
}

const std::array<const char*, 6> kGridColumns = {"delta", "delta_f", "g2", "log10_g2", "g2_analytic", "n_magnon"};

std::string header_for(ScanKind kind) {
    if (kind == ScanKind::g2t) return "t,g2,log10_g2";
    std::string h = kind == ScanKind::thermal ? "n_th," : "";
    for (std::size_t i = 0; i < kGridColumns.size(); ++i) {
        if (i) h += ',';
        h += kGridColumns[i];
    }
    return h;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw InvalidArgument("unknown output format '" + s + "' (expected csv or json)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::scientific, 16);
    return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "nan") return kNaN;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidArgument("not a number: '" + raw + "'");
    return v;
}

std::string format_axis(const Axis& a) {
    return format_double(a.min) + ":" + format_double(a.max) + ":" + std::to_string(a.count);
}

Axis parse_axis(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw InvalidArgument("axis must be min:max:count, got '" + s + "'");
    Axis a;
    a.min = parse_double(parts[0]);
    a.max = parse_double(parts[1]);
    const std::string c = trim(parts[2]);
    int count = 0;
    const auto res = std::from_chars(c.data(), c.data() + c.size(), count);
    if (res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw InvalidArgument("axis count must be an integer, got '" + parts[2] + "'");
    a.count = count;
    a.validate(("'" + s + "'").c_str());
    return a;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const auto& part : split(s, ',')) out.push_back(parse_double(part));
    return out;
}

void write_csv(const ScanResult& r, std::ostream& os) {
    for (const auto& [k, v] : metadata_pairs(r)) os << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (!r.rows[i].error.empty()) os << "# failure = " << i << ": " << sanitize(r.rows[i].error) << '\n';

    os << header_for(r.meta.kind) << '\n';
    if (r.meta.kind == ScanKind::g2t) {
        for (const auto& t : r.trace)
            os << format_double(t.t) << ',' << format_double(t.g2) << ',' << format_double(t.log10_g2()) << '\n';
        return;
    }
    for (const auto& row : r.rows) {
        if (r.meta.kind == ScanKind::thermal) os << format_double(row.n_th) << ',';
        os << format_double(row.delta) << ',' << format_double(row.delta_f) << ',' << format_double(row.g2) << ','
           << format_double(row.log10_g2()) << ',' << optional_field(row.g2_analytic) << ','
           << format_double(row.n_magnon) << '\n';
    }
}

ScanResult read_csv(std::istream& is) {
    ScanResult r;
    std::map<std::size_t, std::string> failures;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find(" = ");
            if (eq == std::string::npos) continue;
            const std::string key = trim(line.substr(1, eq - 1));
            const std::string value = line.substr(eq + 3);
            if (key == "failure") {
                const auto colon = value.find(": ");
                if (colon != std::string::npos)
                    failures[std::stoul(value.substr(0, colon))] = value.substr(colon + 2);
            } else {
                apply_metadata(r.meta, key, value);
            }
            continue;
        }
        if (!header_seen) {
            if (line != header_for(r.meta.kind))
                throw InvalidArgument("unexpected CSV header '" + line + "' for kind " + to_string(r.meta.kind));
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (r.meta.kind == ScanKind::g2t) {
            if (f.size() != 3) throw InvalidArgument("bad trace row at line " + std::to_string(line_no));
            r.trace.push_back({parse_double(f[0]), parse_double(f[1])});
            continue;
        }
        const std::size_t off = r.meta.kind == ScanKind::thermal ? 1 : 0;
        if (f.size() != 6 + off) throw InvalidArgument("bad data row at line " + std::to_string(line_no));
        ScanRow row;
        if (off) row.n_th = parse_double(f[0]);
        else row.n_th = r.meta.params.n_th;
        row.delta = parse_double(f[off + 0]);
        row.delta_f = parse_double(f[off + 1]);
        row.g2 = parse_double(f[off + 2]);
        row.g2_analytic = parse_optional(f[off + 4]);
        row.n_magnon = parse_double(f[off + 5]);
        r.rows.push_back(std::move(row));
    }
    if (!header_seen) throw InvalidArgument("CSV has no header line");
    for (const auto& [i, msg] : failures)
        if (i < r.rows.size()) r.rows[i].error = msg;
    return r;
}

void write_json(const ScanResult& r, std::ostream& os) {
    json meta = json::object();
    for (const auto& [k, v] : metadata_pairs(r)) meta[k] = v;
    // Numeric fields as numbers rather than strings.
    const auto& p = r.meta.params;
    meta["g"] = p.g;
    meta["kappa"] = p.kappa;
    meta["delta"] = p.delta;
    meta["delta_f"] = p.delta_f;
    meta["omega_m"] = p.omega_m_drive;
    meta["omega_nv"] = p.omega_nv_drive;
    meta["lambda"] = p.omega_m_drive > 0.0 ? json(p.omega_nv_drive / p.omega_m_drive) : json(nullptr);
    meta["n_th"] = p.n_th;
    meta["n_max"] = r.meta.n_max;
    meta["include_analytic"] = r.meta.include_analytic;
    meta["residual_tolerance"] = r.meta.residual_tolerance;
    meta["rtol"] = r.meta.rtol;
    meta["atol"] = r.meta.atol;
    meta["workers"] = r.meta.workers;
    meta["wall_time_s"] = r.meta.wall_time_s;
    meta["failures"] = r.failures();
    meta["log10_floor"] = kLog10Floor;

    json doc;
    doc["meta"] = meta;
    if (r.meta.kind == ScanKind::g2t) {
        json trace = json::array();
        for (const auto& t : r.trace)
            trace.push_back({{"t", t.t}, {"g2", number_or_null(t.g2)}, {"log10_g2", number_or_null(t.log10_g2())}});
        doc["trace"] = std::move(trace);
    } else {
        json rows = json::array();
        for (const auto& row : r.rows) {
            json j = {{"delta", row.delta},
                      {"delta_f", row.delta_f},
                      {"g2", number_or_null(row.g2)},
                      {"log10_g2", number_or_null(row.log10_g2())},
                      {"n_magnon", number_or_null(row.n_magnon)}};
            if (r.meta.kind == ScanKind::thermal) j["n_th"] = row.n_th;
            if (row.g2_analytic) j["g2_analytic"] = number_or_null(*row.g2_analytic);
            if (!row.error.empty()) j["error"] = row.error;
            rows.push_back(std::move(j));
        }
        doc["rows"] = std::move(rows);
    }
    os << doc.dump(1) << '\n';
}

ScanResult read_json(std::istream& is) {
    json doc;
    try {
        doc = json::parse(is);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("invalid JSON: ") + e.what());
    }
    ScanResult r;
    const json& meta = doc.at("meta");
    for (const auto& [k, v] : meta.items()) {
        if (v.is_string()) apply_metadata(r.meta, k, v.get<std::string>());
    }
    auto& p = r.meta.params;
    p.g = meta.at("g").get<double>();
    p.kappa = meta.at("kappa").get<double>();
    p.delta = meta.at("delta").get<double>();
    p.delta_f = meta.at("delta_f").get<double>();
    p.omega_m_drive = meta.at("omega_m").get<double>();
    p.omega_nv_drive = meta.at("omega_nv").get<double>();
    p.n_th = meta.at("n_th").get<double>();
    r.meta.n_max = meta.at("n_max").get<int>();
    r.meta.include_analytic = meta.at("include_analytic").get<bool>();
    r.meta.residual_tolerance = meta.at("residual_tolerance").get<double>();
    r.meta.rtol = meta.at("rtol").get<double>();
    r.meta.atol = meta.at("atol").get<double>();
    r.meta.workers = meta.at("workers").get<int>();
    r.meta.wall_time_s = meta.at("wall_time_s").get<double>();

    if (r.meta.kind == ScanKind::g2t) {
        for (const auto& t : doc.at("trace")) r.trace.push_back({t.at("t").get<double>(), number_from(t.at("g2"))});
        return r;
    }
    for (const auto& j : doc.at("rows")) {
        ScanRow row;
        row.delta = j.at("delta").get<double>();
        row.delta_f = j.at("delta_f").get<double>();
        row.g2 = number_from(j.at("g2"));
        row.n_magnon = number_from(j.at("n_magnon"));
        row.n_th = j.contains("n_th") ? j.at("n_th").get<double>() : p.n_th;
        if (j.contains("g2_analytic")) row.g2_analytic = number_from(j.at("g2_analytic"));
        if (j.contains("error")) row.error = j.at("error").get<std::string>();
        r.rows.push_back(std::move(row));
    }
    return r;
}

void write_result_file(const ScanResult& r, const std::string& path, OutputFormat format) {
    const fs::path target(path);
    fs::path dir = target.parent_path();
    if (dir.empty()) dir = ".";
    const fs::path tmp = dir / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::out | std::ios::trunc);
        if (!out) throw IoError(path, "cannot open temporary file " + tmp.string() + " for writing");
        if (format == OutputFormat::csv) write_csv(r, out);
        else write_json(r, out);
        out.flush();
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError(path, "write failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw IoError(path, "cannot move result into place: " + ec.message());
    }
}

ScanResult read_result_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open for reading");
    const int first = in.peek();
    if (first == '{') return read_json(in);
    return read_csv(in);
}

}  // namespace magblock
