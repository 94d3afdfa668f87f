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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isingmem/fidelity.hpp"
#include "isingmem/fitting.hpp"
#include "isingmem/io.hpp"

namespace isingmem {

/// Grid of (N, kT) configurations at one dimension. Stored in each output
/// directory as `sweep.cfg` (key=value; lists comma-separated).
struct SweepSpec
{
    int dimension = 1;
    std::vector<std::uint32_t> sizes;  ///< site counts; perfect squares in 2D
    std::vector<double> temperatures;
    std::uint64_t ensemble_size = 1000;
    TieRule tie_rule = TieRule::RandomChoice;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "sweep_out";
    double J = 1.0;
    double h = 0.0;
    SampleGridSpec grid;
    std::uint64_t step_budget = kDefaultStepBudget;
    bool fit_exponential = false;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;

    KeyValues to_key_values() const;
    static SweepSpec from_key_values(const KeyValues& kv);
};

/// kT grid used when a configuration lists no temperatures: 0.5..8 (1D) or 1.5..8 (2D) in steps of 0.5.
std::vector<double> default_temperatures(int dimension);

/// Side length for N sites; throws unless N is a perfect square in 2D.
std::uint32_t side_length_for(int dimension, std::uint32_t sites);

/// Seed for one configuration; depends only on (master, dim, N, kT).
std::uint64_t config_seed(std::uint64_t master, int dimension, std::uint32_t sites, double kT);

/// `<dim>D_N<N>_kT<kT>`
std::string config_directory_name(int dimension, std::uint32_t sites, double kT);

struct SweepRow
{
    int dimension = 1;
    std::uint32_t sites = 0;
    double kT = 0.0;
    std::uint64_t ensemble_size = 0;
    std::filesystem::path curve_path;
    ModelFit gaussian;
    std::optional<ModelFit> exponential;
    bool truncated = false;
    bool resumed = false;
};

struct SweepFailure
{
    int dimension = 1;
    std::uint32_t sites = 0;
    double kT = 0.0;
    std::string message;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<SweepFailure> failures;
};

struct SweepOptions
{
    bool force = false;
    EnsembleOptions ensemble;
    std::ostream* log = nullptr;
};

/// Simulates and fits every configuration, writing
///   <outdir>/<dim>D_N<N>_kT<kT>/{curve.dat, fit.txt[, fit_exponential.txt]}
/// plus sweep.cfg, summary.tsv and failures.tsv. Configurations whose
/// outputs already exist are loaded instead of rerun unless forced. Fit
/// failures become SweepFailure entries; I/O problems throw.
SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Builds the trajectory template for one configuration of a sweep.
TrajectoryConfig sweep_trajectory_config(const SweepSpec& spec, std::uint32_t sites, double kT);

void write_summary(std::ostream& out, const SweepResult& result);
/// Reads summary.tsv rows back (curve paths are left empty).
SweepResult read_summary(std::istream& in);
SweepResult load_summary(const std::filesystem::path& path);

struct LambdaScalingRow
{
    int dimension = 1;
    double kT = 0.0;
    std::size_t points = 0;
    LinearFit lambda_vs_n;
    bool slope_consistent_with_zero = false;
    std::optional<ScalingClassification> classification;  ///< 2D, >= 4 sizes
};

struct NeffScalingRow
{
    int dimension = 1;
    double kT = 0.0;
    std::size_t points = 0;
    LinearFit through_origin;
    std::optional<LinearFit> free_intercept;  ///< needs >= 2 sizes
    double correlation = 0.0;                 ///< Pearson r of (N, N_eff)
};

struct TemperatureRow
{
    int dimension = 1;
    std::uint32_t sites = 0;
    double kT = 0.0;
    double lambda = 0.0;
    double lambda_ci90 = 0.0;
    double n_eff = 0.0;
    double n_eff_ci90 = 0.0;
};

struct ScalingReport
{
    std::vector<LambdaScalingRow> lambda_rows;
    std::vector<NeffScalingRow> n_eff_rows;
    std::vector<TemperatureRow> temperature_rows;  ///< sizes with >= 2 temperatures
};

/// Scaling tables: lambda vs N per temperature (zero-slope test, plus
/// exponential/power-law classification in 2D), N_eff vs N per temperature
/// with the proportionality constant m, and lambda, N_eff vs kT per size.
/// Throws std::invalid_argument when no temperature has two sizes and no
/// size has two temperatures.
ScalingReport scaling_report(const SweepResult& result, double classification_threshold = kDefaultScalingThreshold);

/// Writes scaling_lambda.tsv, scaling_neff.tsv and params_vs_T.tsv.
void write_scaling_report(const std::filesystem::path& dir, const ScalingReport& report);

}  // namespace isingmem
