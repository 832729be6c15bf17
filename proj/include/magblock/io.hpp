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

/*! \file io.hpp
    \brief On-disk formats for scan results.

    CSV: a block of "# key = value" metadata lines, then a header and one row
    per point. Grid and line scans use

        delta,delta_f,g2,log10_g2,g2_analytic,n_magnon

    thermal scans prepend an n_th column and g2(t) traces use t,g2,log10_g2.
    Numbers are written with 17 significant digits in scientific notation so
    that parsing recovers every value bit for bit. An undefined value is the
    token "nan"; an analytic column that was not requested is left empty.

    JSON mirrors the CSV with a "meta" object and a "rows" (or "trace")
    array; undefined values are null.

    Files are written to a temporary sibling and renamed into place.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "magblock/scan.hpp"

namespace magblock {

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(const std::string& s);

std::string format_double(double v);
double parse_double(const std::string& s);

// "min:max:count"
std::string format_axis(const Axis& a);
Axis parse_axis(const std::string& s);

// "a,b,c"
std::vector<double> parse_list(const std::string& s);

void write_csv(const ScanResult& r, std::ostream& os);
void write_json(const ScanResult& r, std::ostream& os);
ScanResult read_csv(std::istream& is);
ScanResult read_json(std::istream& is);

// Atomic: temp file in the target directory, then rename. Throws IoError.
void write_result_file(const ScanResult& r, const std::string& path, OutputFormat format);
ScanResult read_result_file(const std::string& path);

}  // namespace magblock
