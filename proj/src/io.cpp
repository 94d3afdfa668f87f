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

#include "isingmem/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace isingmem {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool split_key_value(const std::string& line, std::string& key, std::string& value)
{
    const auto eq = line.find('=');
    if (eq == std::string::npos)
        return false;
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return !key.empty();
}

const std::string& require(const KeyValues& kv, const std::string& key)
{
    auto it = kv.find(key);
    if (it == kv.end())
        throw ParseError("missing key '" + key + "'");
    return it->second;
}

}  // namespace

KeyValues parse_key_values(std::istream& in)
{
    KeyValues kv;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line))
    {
        ++number;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        std::string key, value;
        if (!split_key_value(t, key, value))
            throw ParseError("expected key=value", number);
        kv[key] = value;
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    return parse_key_values(in);
}

std::string format_double(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

double parse_double(const std::string& text)
{
    const auto t = trim(text);
    double x = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    {
        // from_chars rejects "inf"/"nan" spellings from other writers.
        std::istringstream is(t);
        if (!(is >> x) || !is.eof())
            throw ParseError("not a number: '" + text + "'");
    }
    return x;
}

std::uint64_t parse_u64(const std::string& text)
{
    const auto t = trim(text);
    std::uint64_t x = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ParseError("not an unsigned integer: '" + text + "'");
    return x;
}

bool parse_bool(const std::string& text)
{
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes")
        return true;
    if (t == "false" || t == "0" || t == "no")
        return false;
    throw ParseError("not a boolean: '" + text + "'");
}

KeyValues metadata_to_key_values(const CurveMetadata& meta)
{
    KeyValues kv = meta.extra;
    kv["dim"] = std::to_string(meta.dimension);
    kv["L"] = std::to_string(meta.side_length);
    kv["N"] = std::to_string(meta.site_count);
    kv["kT"] = format_double(meta.kT);
    kv["J"] = format_double(meta.J);
    kv["h"] = format_double(meta.h);
    kv["M"] = std::to_string(meta.ensemble_size);
    kv["seed"] = std::to_string(meta.seed);
    kv["policy"] = to_string(meta.tie_rule);
    kv["bit"] = std::to_string(meta.encoded_bit);
    kv["exact"] = meta.exact ? "true" : "false";
    kv["truncated"] = meta.truncated ? "true" : "false";
    kv["validated"] = meta.h == 0.0 ? "true" : "false";
    return kv;
}

namespace {

const std::vector<std::string> kMetadataOrder = {"dim", "L",      "N",   "kT",    "J",         "h",        "M",
                                                 "seed", "policy", "bit", "exact", "truncated", "validated"};

// `lines` maps keys to their source line, used in error messages.
CurveMetadata metadata_from_key_values(KeyValues kv, const std::map<std::string, std::size_t>& lines = {})
{
    CurveMetadata meta;
    auto take = [&](const std::string& key) {
        const std::string v = require(kv, key);
        kv.erase(key);
        return v;
    };
    std::string key;
    auto field = [&](const std::string& k) {
        key = k;
        return take(k);
    };
    try
    {
        meta.dimension = static_cast<int>(parse_u64(field("dim")));
        meta.side_length = static_cast<std::uint32_t>(parse_u64(field("L")));
        meta.site_count = static_cast<std::uint32_t>(parse_u64(field("N")));
        meta.kT = parse_double(field("kT"));
        meta.J = parse_double(field("J"));
        meta.h = parse_double(field("h"));
        meta.ensemble_size = parse_u64(field("M"));
        meta.seed = parse_u64(field("seed"));
        meta.tie_rule = parse_tie_rule(field("policy"));
        meta.encoded_bit = static_cast<int>(parse_u64(field("bit")));
        meta.exact = parse_bool(field("exact"));
        meta.truncated = parse_bool(field("truncated"));
    }
    catch (const std::exception& e)
    {
        const auto it = lines.find(key);
        if (it == lines.end())
            throw ParseError(e.what());
        throw ParseError(key + ": " + e.what(), it->second);
    }
    kv.erase("validated");
    meta.extra = std::move(kv);
    return meta;
}

}  // namespace

void write_curve(std::ostream& out, const FidelityCurve& curve)
{
    const auto kv = metadata_to_key_values(curve.metadata);
    for (const auto& key : kMetadataOrder)
        out << "# " << key << '=' << kv.at(key) << '\n';
    for (const auto& [key, value] : curve.metadata.extra)
        out << "# " << key << '=' << value << '\n';
    out << "t\tF\tsigma_F\n";
    for (std::size_t i = 0; i < curve.size(); ++i)
        out << format_double(curve.times[i]) << '\t' << format_double(curve.fidelity[i]) << '\t'
            << format_double(curve.sigma[i]) << '\n';
}

FidelityCurve read_curve(std::istream& in)
{
    KeyValues kv;
    std::map<std::string, std::size_t> key_lines;
    FidelityCurve curve;
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line))
    {
        ++number;
        const auto t = trim(line);
        if (t.empty())
            continue;
        if (t.front() == '#')
        {
            std::string key, value;
            if (!split_key_value(trim(t.substr(1)), key, value))
                throw ParseError("expected '# key=value' metadata", number);
            kv[key] = value;
            key_lines[key] = number;
            continue;
        }
        if (!header_seen)
        {
            if (t.rfind("t\tF\tsigma_F", 0) != 0 && t.rfind("t F sigma_F", 0) != 0)
                throw ParseError("expected column header 't F sigma_F'", number);
            header_seen = true;
            continue;
        }
        std::istringstream row(t);
        std::string a, b, c, extra;
        if (!(row >> a >> b >> c) || (row >> extra))
            throw ParseError("expected three columns", number);
        try
        {
            curve.times.push_back(parse_double(a));
            curve.fidelity.push_back(parse_double(b));
            curve.sigma.push_back(parse_double(c));
        }
        catch (const ParseError& e)
        {
            throw ParseError(e.what(), number);
        }
    }
    if (!header_seen)
        throw ParseError("missing column header");
    curve.metadata = metadata_from_key_values(std::move(kv), key_lines);
    return curve;
}

void save_curve(const std::filesystem::path& path, const FidelityCurve& curve)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
    write_curve(out, curve);
    if (!out)
        throw std::ios_base::failure("write failed for " + path.string());
}

FidelityCurve load_curve(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    return read_curve(in);
}

void write_fit_report(std::ostream& out, const ModelFit& fit, const CurveMetadata& curve)
{
    out << "model=" << to_string(fit.kind) << '\n';
    out << "n_eff=" << format_double(fit.params.n_eff) << '\n';
    out << "n_eff_ci90=" << format_double(fit.n_eff_ci90) << '\n';
    out << "n_eff_lower=" << format_double(fit.n_eff_interval.lower) << '\n';
    out << "n_eff_upper=" << format_double(fit.n_eff_interval.upper) << '\n';
    out << "lambda=" << format_double(fit.params.lambda) << '\n';
    out << "lambda_ci90=" << format_double(fit.lambda_ci90) << '\n';
    out << "lambda_lower=" << format_double(fit.lambda_interval.lower) << '\n';
    out << "lambda_upper=" << format_double(fit.lambda_interval.upper) << '\n';
    out << "ci_method=" << to_string(fit.ci_method) << '\n';
    out << "chi2=" << format_double(fit.chi2) << '\n';
    out << "dof=" << fit.dof << '\n';
    out << "reduced_chi2=" << format_double(fit.reduced_chi2()) << '\n';
    out << "points=" << fit.points << '\n';
    out << "t_first=" << format_double(fit.t_first) << '\n';
    out << "t_last=" << format_double(fit.t_last) << '\n';
    out << "converged=" << (fit.converged ? "true" : "false") << '\n';
    out << "iterations=" << fit.iterations << '\n';
    out << "unphysical_n_eff=" << (fit.unphysical() ? "true" : "false") << '\n';
    const auto kv = metadata_to_key_values(curve);
    for (const auto& [key, value] : kv)
        out << "curve." << key << '=' << value << '\n';
}

FitReport read_fit_report(std::istream& in)
{
    const auto kv = parse_key_values(in);
    FitReport report;
    auto& fit = report.fit;
    try
    {
        fit.kind = parse_model_kind(require(kv, "model"));
        fit.ci_method = parse_ci_method(require(kv, "ci_method"));
    }
    catch (const std::invalid_argument& e)
    {
        throw ParseError(e.what());
    }
    fit.params.n_eff = parse_double(require(kv, "n_eff"));
    fit.n_eff_ci90 = parse_double(require(kv, "n_eff_ci90"));
    fit.n_eff_interval = {parse_double(require(kv, "n_eff_lower")), parse_double(require(kv, "n_eff_upper"))};
    fit.params.lambda = parse_double(require(kv, "lambda"));
    fit.lambda_ci90 = parse_double(require(kv, "lambda_ci90"));
    fit.lambda_interval = {parse_double(require(kv, "lambda_lower")), parse_double(require(kv, "lambda_upper"))};
    fit.chi2 = parse_double(require(kv, "chi2"));
    fit.dof = parse_u64(require(kv, "dof"));
    fit.points = parse_u64(require(kv, "points"));
    fit.t_first = parse_double(require(kv, "t_first"));
    fit.t_last = parse_double(require(kv, "t_last"));
    fit.converged = parse_bool(require(kv, "converged"));
    fit.iterations = parse_u64(require(kv, "iterations"));

    KeyValues meta;
    for (const auto& [key, value] : kv)
    {
        if (key.rfind("curve.", 0) == 0)
            meta[key.substr(6)] = value;
    }
    report.curve = metadata_from_key_values(std::move(meta));
    return report;
}

}  // namespace isingmem
