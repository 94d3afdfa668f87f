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

// Command-line front end: simulate, fit, sweep, oracle, analytic, report.
//
// Exit codes: 0 success, 1 validation error, 2 partial failure, 3 I/O error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isingmem/analytic.hpp"
#include "isingmem/exact_oracle.hpp"
#include "isingmem/fidelity.hpp"
#include "isingmem/fitting.hpp"
#include "isingmem/io.hpp"
#include "isingmem/sweep.hpp"

using namespace isingmem;

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kPartial = 2, kIo = 3 };

// Spec keys exposed as flags. Each accepts --key and --key-with-dashes.
const char* const kSpecKeys[] = {"dimension",      "sizes",          "temperatures",  "ensemble_size",
                                 "tie_policy",     "master_seed",    "output_dir",    "J",
                                 "h",              "t_min",          "t_max",         "geometric_points",
                                 "linear_points",  "pilot_ensemble", "plateau_sigma", "t_max_factor",
                                 "step_budget",    "fit_exponential"};

struct SpecFlags
{
    std::string config_file;
    std::map<std::string, std::string> values;

    void attach(CLI::App& app, const std::vector<std::string>& keys)
    {
        app.add_option("-c,--config", config_file, "key=value specification file; flags override it");
        for (const auto& key : keys)
        {
            std::string names = "--" + key;
            std::string dashed = key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            if (dashed != key)
                names += ",--" + dashed;
            if (key == "sizes")
                names += ",-N";
            if (key == "temperatures")
                names += ",--kT";
            if (key == "ensemble_size")
                names += ",-M";
            app.add_option(names, values[key], "overrides '" + key + "'");
        }
    }

    // Config file first, then every flag that was given.
    KeyValues merged(const CLI::App& app) const
    {
        KeyValues kv;
        if (!config_file.empty())
            kv = read_key_values(config_file);
        for (const auto& [key, value] : values)
            if (app.count("--" + key) > 0)
                kv[key] = value;
        return kv;
    }
};

std::vector<std::string> all_spec_keys()
{
    return {std::begin(kSpecKeys), std::end(kSpecKeys)};
}

// Single-configuration view of a spec.
struct SingleConfig
{
    SweepSpec spec;
    std::uint32_t sites = 0;
    double kT = 0.0;
};

SingleConfig single_config(KeyValues kv, std::uint64_t default_ensemble)
{
    if (!kv.count("ensemble_size"))
        kv["ensemble_size"] = std::to_string(default_ensemble);
    if (!kv.count("sizes") || !kv.count("temperatures"))
        throw std::invalid_argument("need one lattice size (--sizes/-N) and one temperature (--temperatures/--kT)");
    SingleConfig one{SweepSpec::from_key_values(kv)};
    if (one.spec.sizes.size() != 1 || one.spec.temperatures.size() != 1)
        throw std::invalid_argument("exactly one size and one temperature expected");
    one.spec.validate();
    one.sites = one.spec.sizes.front();
    one.kT = one.spec.temperatures.front();
    return one;
}

std::vector<double> parse_times(const std::string& text)
{
    std::vector<double> times;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
    {
        try
        {
            times.push_back(parse_double(item));
        }
        catch (const ParseError&)
        {
            throw std::invalid_argument("bad time value '" + item + "'");
        }
    }
    if (times.empty())
        throw std::invalid_argument("empty time list");
    return times;
}

// Uniform grid on [0, t_max], each point rounded up to a whole number of steps.
std::vector<double> uniform_times(double t_max, std::size_t points, std::uint32_t sites)
{
    if (!(t_max > 0.0) || points < 2)
        throw std::invalid_argument("need t_max > 0 and at least 2 points");
    std::vector<double> times;
    for (std::size_t i = 0; i < points; ++i)
    {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
        const double snapped = static_cast<double>(steps_for_time(t, sites)) / sites;
        if (times.empty() || snapped > times.back())
            times.push_back(snapped);
    }
    return times;
}

template <class Fn>
void with_output(const std::string& path, Fn&& fn)
{
    if (path.empty() || path == "-")
    {
        fn(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::ios_base::failure("cannot write " + path);
    fn(out);
    out.flush();
    if (!out)
        throw std::ios_base::failure("write failed: " + path);
}

void emit_curve(const std::string& path, const FidelityCurve& curve)
{
    with_output(path, [&](std::ostream& out) { write_curve(out, curve); });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ising-lattice memory fidelity simulator"};
    app.set_help_flag("--help", "print this help and exit");  // -h is the field strength
    app.require_subcommand(1);
    unsigned threads = 0;
    bool quiet = false;
    app.add_option("-j,--threads", threads, "worker threads (0 = all cores)");
    app.add_flag("-q,--quiet", quiet, "suppress progress messages");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "estimate the fidelity curve of one configuration");
    SpecFlags sim_flags;
    sim_flags.attach(*simulate, all_spec_keys());
    std::string sim_out, sim_times;
    simulate->add_option("-o,--out", sim_out, "curve file (default stdout)");
    simulate->add_option("--times", sim_times, "comma-separated sample times instead of the adaptive grid");

    // fit
    auto* fit = app.add_subcommand("fit", "fit the decay models to a curve file");
    std::string fit_in, fit_out, fit_model = "gaussian";
    bool fit_linearized = false;
    fit->add_option("-i,--in", fit_in, "curve file")->required();
    fit->add_option("-o,--out", fit_out, "report file (default stdout)");
    fit->add_option("--model", fit_model, "gaussian or exponential")
        ->check(CLI::IsMember({"gaussian", "exponential"}));
    fit->add_flag("--linearized", fit_linearized, "covariance intervals instead of profile likelihood");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a grid of configurations and fit each one");
    SpecFlags sweep_flags;
    sweep_flags.attach(*sweep, all_spec_keys());
    bool force = false;
    sweep->add_flag("--force", force, "recompute configurations that already have outputs");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "exact fidelity curve of a small lattice");
    SpecFlags oracle_flags;
    oracle_flags.attach(*oracle, {"dimension", "sizes", "temperatures", "tie_policy", "J", "h", "t_max"});
    std::string oracle_out, oracle_times;
    std::size_t oracle_points = 101;
    oracle->add_option("-o,--out", oracle_out, "curve file (default stdout)");
    oracle->add_option("--times", oracle_times, "comma-separated sample times");
    oracle->add_option("--points", oracle_points, "uniform grid size when --times is absent");

    // analytic
    auto* analytic = app.add_subcommand("analytic", "tabulate a decay model in the curve format");
    std::string model = "gaussian", an_out, an_times, an_ties = "DeclareFailure";
    double an_n_eff = 0.0, an_lambda = 0.5, an_t_max = 10.0;
    std::uint64_t an_n = 0;
    std::size_t an_points = 201;
    analytic->add_option("--model", model, "binomial, gaussian or exponential")
        ->check(CLI::IsMember({"binomial", "gaussian", "exponential"}));
    analytic->add_option("--n_eff,--n-eff", an_n_eff, "effective spin count (gaussian)");
    analytic->add_option("-N,--sites", an_n, "spin count (binomial)");
    analytic->add_option("--lambda", an_lambda, "flip rate");
    analytic->add_option("--t_max,--t-max", an_t_max, "last time");
    analytic->add_option("--points", an_points, "grid size");
    analytic->add_option("--times", an_times, "comma-separated times instead of the grid");
    analytic->add_option("--tie_policy,--tie-policy", an_ties, "tie rule (binomial)");
    analytic->add_option("-o,--out", an_out, "curve file (default stdout)");

    // report
    auto* report = app.add_subcommand("report", "scaling tables from a sweep summary");
    std::string rep_in, rep_out;
    double rep_threshold = kDefaultScalingThreshold;
    report->add_option("-i,--in", rep_in, "summary.tsv or a sweep output directory")->required();
    report->add_option("-o,--out", rep_out, "directory for the tables (default: next to the summary)");
    report->add_option("--threshold", rep_threshold, "chi-square margin for the lambda scaling verdict");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    EnsembleOptions ensemble;
    ensemble.threads = threads;

    try
    {
        if (*simulate)
        {
            auto one = single_config(sim_flags.merged(*simulate), 10000);
            auto config = sweep_trajectory_config(one.spec, one.sites, one.kT);
            const ReadoutPolicy policy{one.spec.tie_rule};
            bool truncated = false;
            if (!sim_times.empty())
            {
                config.sample_times = parse_times(sim_times);
            }
            else
            {
                const auto grid = plan_sample_times(config, one.spec.grid, policy, ensemble);
                config.sample_times = grid.times;
                truncated = grid.truncated;
            }
            auto curve = estimate_fidelity(config, one.spec.ensemble_size, policy, ensemble);
            curve.metadata.truncated = curve.metadata.truncated || truncated;
            emit_curve(sim_out, curve);
            if (curve.metadata.truncated && !quiet)
                std::cerr << "warning: step budget reached; curve is truncated\n";
            return kOk;
        }

        if (*fit)
        {
            const auto curve = load_curve(fit_in);
            FitOptions options;
            options.profile_intervals = !fit_linearized;
            ModelFit result;
            try
            {
                result = fit_model == "gaussian" ? fit_gaussian_model(curve, curve.metadata.site_count, options)
                                                 : fit_exponential_model(curve, options);
            }
            catch (const NoDecayError& e)
            {
                std::cerr << "no decay: " << e.what() << '\n';
                return kPartial;
            }
            with_output(fit_out, [&](std::ostream& out) { write_fit_report(out, result, curve.metadata); });
            if (result.unphysical() && !quiet)
                std::cerr << "warning: N_eff < 1 is unphysical\n";
            return result.converged ? kOk : kPartial;
        }

        if (*sweep)
        {
            const auto spec = SweepSpec::from_key_values(sweep_flags.merged(*sweep));
            SweepOptions options;
            options.force = force;
            options.ensemble = ensemble;
            options.log = quiet ? nullptr : &std::cerr;
            const auto result = run_sweep(spec, options);
            for (const auto& f : result.failures)
                std::cerr << "failed: " << config_directory_name(f.dimension, f.sites, f.kT) << ": " << f.message
                          << '\n';
            if (!quiet)
                std::cerr << result.rows.size() << " fitted, " << result.failures.size() << " failed\n";
            return result.failures.empty() ? kOk : kPartial;
        }

        if (*oracle)
        {
            auto kv = oracle_flags.merged(*oracle);
            if (!kv.count("t_max") || kv["t_max"] == "auto")
                kv["t_max"] = "10";
            auto one = single_config(kv, 1);
            const Geometry geometry(static_cast<Dimension>(one.spec.dimension),
                                    side_length_for(one.spec.dimension, one.sites));
            const auto times = oracle_times.empty() ? uniform_times(*one.spec.grid.t_max, oracle_points, one.sites)
                                                    : parse_times(oracle_times);
            const auto curve = exact_fidelity(geometry, Couplings{one.spec.J, one.spec.h}, Temperature(one.kT),
                                              times, ReadoutPolicy{one.spec.tie_rule});
            emit_curve(oracle_out, curve);
            return kOk;
        }

        if (*analytic)
        {
            if (!(an_lambda > 0.0))
                throw std::invalid_argument("--lambda must be positive");
            const TieRule ties = parse_tie_rule(an_ties);
            std::vector<double> times;
            if (!an_times.empty())
                times = parse_times(an_times);
            else
            {
                if (!(an_t_max > 0.0) || an_points < 2)
                    throw std::invalid_argument("need --t_max > 0 and --points >= 2");
                for (std::size_t i = 0; i < an_points; ++i)
                    times.push_back(an_t_max * static_cast<double>(i) / static_cast<double>(an_points - 1));
            }

            FidelityCurve curve;
            curve.times = times;
            auto& meta = curve.metadata;
            meta.exact = true;
            meta.tie_rule = ties;
            meta.extra["model"] = model;
            meta.extra["lambda"] = format_double(an_lambda);
            if (model == "binomial")
            {
                if (an_n == 0)
                    throw std::invalid_argument("binomial model needs --sites");
                meta.site_count = meta.side_length = static_cast<std::uint32_t>(an_n);
                for (double t : times)
                    curve.fidelity.push_back(binomial_fidelity(an_n, an_lambda, t, ties));
            }
            else if (model == "gaussian")
            {
                if (!(an_n_eff > 0.0))
                    throw std::invalid_argument("gaussian model needs --n_eff > 0");
                meta.extra["n_eff"] = format_double(an_n_eff);
                meta.site_count = meta.side_length =
                    an_n > 0 ? static_cast<std::uint32_t>(an_n) : static_cast<std::uint32_t>(std::ceil(an_n_eff));
                for (double t : times)
                    curve.fidelity.push_back(gaussian_fidelity({an_n_eff, an_lambda}, t));
            }
            else
            {
                for (double t : times)
                    curve.fidelity.push_back(exponential_fidelity(an_lambda, t));
            }
            curve.sigma.assign(times.size(), 0.0);
            emit_curve(an_out, curve);
            return kOk;
        }

        if (*report)
        {
            std::filesystem::path in = rep_in;
            if (std::filesystem::is_directory(in))
                in /= "summary.tsv";
            const auto result = load_summary(in);
            const auto tables = scaling_report(result, rep_threshold);
            const std::filesystem::path dir = rep_out.empty() ? in.parent_path() : std::filesystem::path(rep_out);
            std::error_code ec;
            std::filesystem::create_directories(dir.empty() ? "." : dir, ec);
            write_scaling_report(dir.empty() ? "." : dir, tables);
            for (const auto& row : tables.lambda_rows)
            {
                std::cout << row.dimension << "D kT=" << format_double(row.kT) << " lambda-vs-N slope "
                          << format_double(row.lambda_vs_n.slope) << " +- " << format_double(row.lambda_vs_n.slope_ci90)
                          << (row.slope_consistent_with_zero ? " (flat)" : " (varies)");
                if (row.classification)
                    std::cout << ", scaling " << to_string(row.classification->verdict);
                std::cout << '\n';
            }
            for (const auto& row : tables.n_eff_rows)
                std::cout << row.dimension << "D kT=" << format_double(row.kT) << " N_eff/N "
                          << format_double(row.through_origin.slope) << " +- "
                          << format_double(row.through_origin.slope_ci90) << ", r=" << format_double(row.correlation)
                          << '\n';
            return kOk;
        }
    }
    catch (const ParseError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    catch (const std::ios_base::failure& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kOk;
}
