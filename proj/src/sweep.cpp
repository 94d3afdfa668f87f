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

#include "isingmem/sweep.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "isingmem/rng.hpp"

namespace isingmem {

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ','))
    {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        const auto last = item.find_last_not_of(" \t");
        out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

template <class T, class Fn>
std::string join(const std::vector<T>& values, Fn&& fmt)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i)
            out += ',';
        out += fmt(values[i]);
    }
    return out;
}

std::string scientific(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

bool path_exists(const std::filesystem::path& p)
{
    std::error_code ec;
    return std::filesystem::exists(p, ec);
}

void log_line(const SweepOptions& options, const std::string& text)
{
    if (options.log)
        *options.log << text << std::endl;
}

}  // namespace

std::uint32_t side_length_for(int dimension, std::uint32_t sites)
{
    if (sites < 1)
        throw std::invalid_argument("site count must be positive");
    if (dimension == 1)
        return sites;
    if (dimension != 2)
        throw std::invalid_argument("dimension must be 1 or 2");
    auto side = static_cast<std::uint32_t>(std::llround(std::sqrt(static_cast<double>(sites))));
    if (std::uint64_t{side} * side != sites)
        throw std::invalid_argument("2D site count " + std::to_string(sites) + " is not a perfect square");
    return side;
}

void SweepSpec::validate() const
{
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("dimension must be 1 or 2");
    if (sizes.empty())
        throw std::invalid_argument("sweep needs at least one size");
    if (temperatures.empty())
        throw std::invalid_argument("sweep needs at least one temperature");
    for (auto n : sizes)
        side_length_for(dimension, n);
    for (double kT : temperatures)
    {
        if (!(kT > 0.0) || !std::isfinite(kT))
            throw std::invalid_argument("temperatures must be positive");
    }
    if (ensemble_size < 1)
        throw std::invalid_argument("ensemble size must be at least 1");
    if (step_budget < 1)
        throw std::invalid_argument("step budget must be positive");
    if (output_dir.empty())
        throw std::invalid_argument("output directory is required");
}

KeyValues SweepSpec::to_key_values() const
{
    KeyValues kv;
    kv["dimension"] = std::to_string(dimension);
    kv["sizes"] = join(sizes, [](std::uint32_t n) { return std::to_string(n); });
    kv["temperatures"] = join(temperatures, [](double t) { return format_double(t); });
    kv["ensemble_size"] = std::to_string(ensemble_size);
    kv["tie_policy"] = to_string(tie_rule);
    kv["master_seed"] = std::to_string(master_seed);
    kv["output_dir"] = output_dir.string();
    kv["J"] = format_double(J);
    kv["h"] = format_double(h);
    kv["t_min"] = format_double(grid.t_min);
    kv["t_max"] = grid.t_max ? format_double(*grid.t_max) : "auto";
    kv["geometric_points"] = std::to_string(grid.geometric_points);
    kv["linear_points"] = std::to_string(grid.linear_points);
    kv["pilot_ensemble"] = std::to_string(grid.pilot_ensemble);
    kv["plateau_sigma"] = format_double(grid.plateau_sigma);
    kv["t_max_factor"] = format_double(grid.t_max_factor);
    kv["step_budget"] = std::to_string(step_budget);
    kv["fit_exponential"] = fit_exponential ? "true" : "false";
    return kv;
}

std::vector<double> default_temperatures(int dimension)
{
    std::vector<double> temps;
    for (int k = dimension == 2 ? 3 : 1; k <= 16; ++k)
        temps.push_back(0.5 * k);
    return temps;
}

SweepSpec SweepSpec::from_key_values(const KeyValues& kv)
{
    static const char* known[] = {"dimension",      "sizes",         "temperatures",   "ensemble_size",
                                  "tie_policy",     "master_seed",   "output_dir",     "J",
                                  "h",              "t_min",         "t_max",          "geometric_points",
                                  "linear_points",  "pilot_ensemble", "plateau_sigma", "t_max_factor",
                                  "step_budget",    "fit_exponential"};
    for (const auto& [key, value] : kv)
    {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known))
            throw std::invalid_argument("unknown sweep key '" + key + "'");
    }

    SweepSpec spec;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    try
    {
        if (auto v = get("dimension"))
            spec.dimension = static_cast<int>(parse_u64(*v));
        if (auto v = get("sizes"))
            for (const auto& item : split_list(*v))
                spec.sizes.push_back(static_cast<std::uint32_t>(parse_u64(item)));
        if (auto v = get("temperatures"))
            for (const auto& item : split_list(*v))
                spec.temperatures.push_back(parse_double(item));
        else
            spec.temperatures = default_temperatures(spec.dimension);
        if (auto v = get("ensemble_size"))
            spec.ensemble_size = parse_u64(*v);
        if (auto v = get("tie_policy"))
            spec.tie_rule = parse_tie_rule(*v);
        if (auto v = get("master_seed"))
            spec.master_seed = parse_u64(*v);
        if (auto v = get("output_dir"))
            spec.output_dir = *v;
        if (auto v = get("J"))
            spec.J = parse_double(*v);
        if (auto v = get("h"))
            spec.h = parse_double(*v);
        if (auto v = get("t_min"))
            spec.grid.t_min = parse_double(*v);
        if (auto v = get("t_max"))
        {
            if (*v == "auto")
                spec.grid.t_max.reset();
            else
                spec.grid.t_max = parse_double(*v);
        }
        if (auto v = get("geometric_points"))
            spec.grid.geometric_points = parse_u64(*v);
        if (auto v = get("linear_points"))
            spec.grid.linear_points = parse_u64(*v);
        if (auto v = get("pilot_ensemble"))
            spec.grid.pilot_ensemble = parse_u64(*v);
        if (auto v = get("plateau_sigma"))
            spec.grid.plateau_sigma = parse_double(*v);
        if (auto v = get("t_max_factor"))
            spec.grid.t_max_factor = parse_double(*v);
        if (auto v = get("step_budget"))
            spec.step_budget = parse_u64(*v);
        if (auto v = get("fit_exponential"))
            spec.fit_exponential = parse_bool(*v);
    }
    catch (const ParseError& e)
    {
        throw std::invalid_argument(e.what());
    }
    return spec;
}

std::uint64_t config_seed(std::uint64_t master, int dimension, std::uint32_t sites, double kT)
{
    std::uint64_t bits = 0;
    static_assert(sizeof bits == sizeof kT);
    std::memcpy(&bits, &kT, sizeof bits);
    const std::uint64_t key = splitmix64((static_cast<std::uint64_t>(dimension) << 32) | sites) ^ splitmix64(bits);
    return splitmix64(splitmix64(master) ^ key);
}

std::string config_directory_name(int dimension, std::uint32_t sites, double kT)
{
    return std::to_string(dimension) + "D_N" + std::to_string(sites) + "_kT" + format_double(kT);
}

TrajectoryConfig sweep_trajectory_config(const SweepSpec& spec, std::uint32_t sites, double kT)
{
    const Geometry geometry(static_cast<Dimension>(spec.dimension), side_length_for(spec.dimension, sites));
    TrajectoryConfig config{geometry, Couplings{spec.J, spec.h}, Temperature(kT), 1, 0, {}};
    config.master_seed = config_seed(spec.master_seed, spec.dimension, sites, kT);
    config.step_budget = spec.step_budget;
    return config;
}

namespace {

void save_fit(const std::filesystem::path& path, const ModelFit& fit, const CurveMetadata& meta)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot write " + path.string());
    write_fit_report(out, fit, meta);
}

std::optional<ModelFit> load_fit(const std::filesystem::path& path)
{
    if (!path_exists(path))
        return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    return read_fit_report(in).fit;
}

void write_failures(std::ostream& out, const SweepResult& result)
{
    out << "dim\tN\tkT\terror\n";
    for (const auto& f : result.failures)
        out << f.dimension << '\t' << f.sites << '\t' << scientific(f.kT) << '\t' << f.message << '\n';
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options)
{
    spec.validate();
    const auto& root = spec.output_dir;
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec || !std::filesystem::is_directory(root))
        throw std::ios_base::failure("cannot create output directory " + root.string());

    {
        std::ofstream cfg(root / "sweep.cfg", std::ios::binary | std::ios::trunc);
        if (!cfg)
            throw std::ios_base::failure("cannot write " + (root / "sweep.cfg").string());
        cfg << "# isingmem sweep specification\n";
        for (const auto& [key, value] : spec.to_key_values())
            cfg << key << '=' << value << '\n';
    }

    const ReadoutPolicy policy{spec.tie_rule};
    SweepResult result;
    for (auto sites : spec.sizes)
    {
        for (double kT : spec.temperatures)
        {
            const auto dir = root / config_directory_name(spec.dimension, sites, kT);
            const auto curve_path = dir / "curve.dat";
            const auto fit_path = dir / "fit.txt";
            const auto exp_path = dir / "fit_exponential.txt";
            std::filesystem::create_directories(dir, ec);
            if (ec)
                throw std::ios_base::failure("cannot create " + dir.string());

            SweepRow row;
            row.dimension = spec.dimension;
            row.sites = sites;
            row.kT = kT;
            row.ensemble_size = spec.ensemble_size;
            row.curve_path = curve_path;

            FidelityCurve curve;
            const bool have_curve = !options.force && path_exists(curve_path);
            if (have_curve)
            {
                curve = load_curve(curve_path);
                row.resumed = true;
            }
            else
            {
                auto config = sweep_trajectory_config(spec, sites, kT);
                log_line(options, "simulating " + dir.filename().string());
                const auto grid = plan_sample_times(config, spec.grid, policy, options.ensemble);
                config.sample_times = grid.times;
                curve = estimate_fidelity(config, spec.ensemble_size, policy, options.ensemble);
                curve.metadata.truncated = curve.metadata.truncated || grid.truncated;
                save_curve(curve_path, curve);
            }
            row.truncated = curve.metadata.truncated;

            try
            {
                std::optional<ModelFit> fit = have_curve ? load_fit(fit_path) : std::nullopt;
                if (!fit)
                {
                    fit = fit_gaussian_model(curve, sites);
                    save_fit(fit_path, *fit, curve.metadata);
                }
                row.gaussian = *fit;
                if (spec.fit_exponential)
                {
                    std::optional<ModelFit> e = have_curve ? load_fit(exp_path) : std::nullopt;
                    if (!e)
                    {
                        e = fit_exponential_model(curve);
                        save_fit(exp_path, *e, curve.metadata);
                    }
                    row.exponential = e;
                }
                result.rows.push_back(std::move(row));
            }
            catch (const NoDecayError& e)
            {
                result.failures.push_back({spec.dimension, sites, kT, std::string("NoDecay: ") + e.what()});
            }
            catch (const std::invalid_argument& e)
            {
                result.failures.push_back({spec.dimension, sites, kT, e.what()});
            }
        }
    }

    {
        std::ofstream out(root / "summary.tsv", std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::ios_base::failure("cannot write summary.tsv");
        write_summary(out, result);
        std::ofstream fail(root / "failures.tsv", std::ios::binary | std::ios::trunc);
        if (!fail)
            throw std::ios_base::failure("cannot write failures.tsv");
        write_failures(fail, result);
    }
    return result;
}

void write_summary(std::ostream& out, const SweepResult& result)
{
    out << "dim\tN\tkT\tM\tlambda\tlambda_ci\tn_eff\tn_eff_ci\tchi2\tdof\tconverged\n";
    for (const auto& r : result.rows)
    {
        const auto& f = r.gaussian;
        out << r.dimension << '\t' << r.sites << '\t' << scientific(r.kT) << '\t' << r.ensemble_size << '\t'
            << scientific(f.params.lambda) << '\t' << scientific(f.lambda_ci90) << '\t'
            << scientific(f.params.n_eff) << '\t' << scientific(f.n_eff_ci90) << '\t' << scientific(f.chi2)
            << '\t' << f.dof << '\t' << (f.converged ? "true" : "false") << '\n';
    }
}

SweepResult read_summary(std::istream& in)
{
    SweepResult result;
    std::string line;
    std::size_t number = 0;
    bool header = false;
    while (std::getline(in, line))
    {
        ++number;
        if (line.empty())
            continue;
        if (!header)
        {
            if (line.rfind("dim\tN\tkT", 0) != 0)
                throw ParseError("expected summary header", number);
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, '\t'))
            cells.push_back(cell);
        if (cells.size() != 11)
            throw ParseError("expected 11 columns", number);
        try
        {
            SweepRow r;
            r.dimension = static_cast<int>(parse_u64(cells[0]));
            r.sites = static_cast<std::uint32_t>(parse_u64(cells[1]));
            r.kT = parse_double(cells[2]);
            r.ensemble_size = parse_u64(cells[3]);
            r.gaussian.params.lambda = parse_double(cells[4]);
            r.gaussian.lambda_ci90 = parse_double(cells[5]);
            r.gaussian.params.n_eff = parse_double(cells[6]);
            r.gaussian.n_eff_ci90 = parse_double(cells[7]);
            r.gaussian.chi2 = parse_double(cells[8]);
            r.gaussian.dof = parse_u64(cells[9]);
            r.gaussian.converged = parse_bool(cells[10]);
            result.rows.push_back(r);
        }
        catch (const ParseError& e)
        {
            throw ParseError(e.what(), number);
        }
    }
    if (!header)
        throw ParseError("empty summary");
    return result;
}

SweepResult load_summary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path.string());
    return read_summary(in);
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// Parameter CIs are 90% half-widths; the line fits want one-sigma errors.
double one_sigma(double ci90, double value)
{
    const double s = ci90 / kZ90;
    return s > 0.0 ? s : std::max(1e-12, 1e-6 * std::abs(value));
}

}  // namespace

ScalingReport scaling_report(const SweepResult& result, double classification_threshold)
{
    // (dim, kT) -> rows sorted by N; (dim, N) -> rows sorted by kT
    std::map<std::pair<int, double>, std::vector<const SweepRow*>> by_temperature;
    std::map<std::pair<int, std::uint32_t>, std::vector<const SweepRow*>> by_size;
    for (const auto& r : result.rows)
    {
        by_temperature[{r.dimension, r.kT}].push_back(&r);
        by_size[{r.dimension, r.sites}].push_back(&r);
    }

    ScalingReport report;
    for (auto& [key, rows] : by_temperature)
    {
        if (rows.size() < 2)
            continue;
        std::sort(rows.begin(), rows.end(), [](auto a, auto b) { return a->sites < b->sites; });
        std::vector<double> n, lambda, lambda_err, n_eff, n_eff_err;
        for (auto r : rows)
        {
            n.push_back(r->sites);
            lambda.push_back(r->gaussian.params.lambda);
            lambda_err.push_back(one_sigma(r->gaussian.lambda_ci90, r->gaussian.params.lambda));
            n_eff.push_back(r->gaussian.params.n_eff);
            n_eff_err.push_back(one_sigma(r->gaussian.n_eff_ci90, r->gaussian.params.n_eff));
        }

        LambdaScalingRow lrow;
        lrow.dimension = key.first;
        lrow.kT = key.second;
        lrow.points = rows.size();
        lrow.lambda_vs_n = fit_linear(n, lambda, lambda_err);
        lrow.slope_consistent_with_zero = lrow.lambda_vs_n.slope_consistent_with(0.0);
        if (key.first == 2 && rows.size() >= 4)
            lrow.classification = classify_lambda_scaling(n, lambda, lambda_err, classification_threshold);
        report.lambda_rows.push_back(lrow);

        NeffScalingRow nrow;
        nrow.dimension = key.first;
        nrow.kT = key.second;
        nrow.points = rows.size();
        nrow.through_origin = fit_proportional(n, n_eff, n_eff_err);
        nrow.free_intercept = fit_linear(n, n_eff, n_eff_err);
        nrow.correlation = pearson(n, n_eff);
        report.n_eff_rows.push_back(nrow);
    }
    for (auto& [key, rows] : by_size)
    {
        if (rows.size() < 2)
            continue;
        std::sort(rows.begin(), rows.end(), [](auto a, auto b) { return a->kT < b->kT; });
        for (auto r : rows)
            report.temperature_rows.push_back({r->dimension, r->sites, r->kT, r->gaussian.params.lambda,
                                               r->gaussian.lambda_ci90, r->gaussian.params.n_eff,
                                               r->gaussian.n_eff_ci90});
    }
    if (report.lambda_rows.empty() && report.temperature_rows.empty())
        throw std::invalid_argument("scaling report needs two sizes at one temperature or two temperatures at one size");
    return report;
}

void write_scaling_report(const std::filesystem::path& dir, const ScalingReport& report)
{
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::ios_base::failure("cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("scaling_lambda.tsv");
        out << "dim\tkT\tpoints\tslope\tslope_ci90\tintercept\tslope_zero_consistent\tclassification\t"
               "exp_chi2\tpower_chi2\tdelta_chi2\n";
        for (const auto& r : report.lambda_rows)
        {
            out << r.dimension << '\t' << scientific(r.kT) << '\t' << r.points << '\t'
                << scientific(r.lambda_vs_n.slope) << '\t' << scientific(r.lambda_vs_n.slope_ci90) << '\t'
                << scientific(r.lambda_vs_n.intercept) << '\t' << (r.slope_consistent_with_zero ? "true" : "false");
            if (r.classification)
                out << '\t' << to_string(r.classification->verdict) << '\t'
                    << scientific(r.classification->exponential.chi2) << '\t'
                    << scientific(r.classification->power_law.chi2) << '\t'
                    << scientific(r.classification->delta_chi2) << '\n';
            else
                out << "\tn/a\tn/a\tn/a\tn/a\n";
        }
    }
    {
        auto out = open("scaling_neff.tsv");
        out << "dim\tkT\tpoints\tm\tm_ci90\tslope\tslope_ci90\tintercept\tcorrelation\n";
        for (const auto& r : report.n_eff_rows)
        {
            out << r.dimension << '\t' << scientific(r.kT) << '\t' << r.points << '\t'
                << scientific(r.through_origin.slope) << '\t' << scientific(r.through_origin.slope_ci90);
            if (r.free_intercept)
                out << '\t' << scientific(r.free_intercept->slope) << '\t'
                    << scientific(r.free_intercept->slope_ci90) << '\t' << scientific(r.free_intercept->intercept);
            else
                out << "\tn/a\tn/a\tn/a";
            out << '\t' << scientific(r.correlation) << '\n';
        }
    }
    {
        auto out = open("params_vs_T.tsv");
        out << "dim\tN\tkT\tlambda\tlambda_ci\tn_eff\tn_eff_ci\n";
        for (const auto& r : report.temperature_rows)
            out << r.dimension << '\t' << r.sites << '\t' << scientific(r.kT) << '\t' << scientific(r.lambda)
                << '\t' << scientific(r.lambda_ci90) << '\t' << scientific(r.n_eff) << '\t'
                << scientific(r.n_eff_ci90) << '\n';
    }
}

}  // namespace isingmem
