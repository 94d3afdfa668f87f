/*
   Copyright 2026 The isingmem Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "isingmem/fidelity.hpp"
#include "isingmem/fitting.hpp"

namespace isingmem {

/// Malformed input file; carries the 1-based line number when known.
class ParseError : public std::runtime_error
{
  public:
    ParseError(const std::string& what, std::size_t line = 0);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

using KeyValues = std::map<std::string, std::string>;

/// Reads `key=value` lines. Blank lines and lines starting with '#' are
/// skipped; whitespace around keys and values is trimmed.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);
double parse_double(const std::string& text);
std::uint64_t parse_u64(const std::string& text);
bool parse_bool(const std::string& text);

/// Curve file: `# key=value` metadata lines, a `t<TAB>F<TAB>sigma_F`
/// header row, then one tab-separated row per sample time.
void write_curve(std::ostream& out, const FidelityCurve& curve);
FidelityCurve read_curve(std::istream& in);
void save_curve(const std::filesystem::path& path, const FidelityCurve& curve);
FidelityCurve load_curve(const std::filesystem::path& path);

KeyValues metadata_to_key_values(const CurveMetadata& meta);

struct FitReport
{
    ModelFit fit;
    CurveMetadata curve;
};

/// Fit report: key=value lines, the fit first, then the source curve's
/// metadata under a `curve.` prefix.
void write_fit_report(std::ostream& out, const ModelFit& fit, const CurveMetadata& curve);
FitReport read_fit_report(std::istream& in);

}  // namespace isingmem
