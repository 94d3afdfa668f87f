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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isingmem/glauber.hpp"
#include "isingmem/lattice.hpp"

namespace isingmem {

/// Identifies the run that produced a curve. Written as the `#` header of
/// curve files.
struct CurveMetadata
{
    int dimension = 1;
    std::uint32_t side_length = 1;
    std::uint32_t site_count = 1;
    double kT = 1.0;
    double J = 1.0;
    double h = 0.0;
    std::uint64_t ensemble_size = 0;
    std::uint64_t seed = 0;
    TieRule tie_rule = TieRule::DeclareFailure;
    int encoded_bit = 1;
    bool exact = false;
    bool truncated = false;
    /// Unrecognized header keys, preserved on round trip.
    std::map<std::string, std::string> extra;
};

/// Estimated fidelity with per-point uncertainty. Exact curves carry
/// sigma = 0 and metadata.exact = true.
struct FidelityCurve
{
    std::vector<double> times;
    std::vector<double> fidelity;
    std::vector<double> sigma;
    CurveMetadata metadata;

    std::size_t size() const { return times.size(); }
};

/// max{ 1/(2M), sqrt(F(1-F)/M) }.
double sigma_f(double fidelity, std::uint64_t ensemble_size);

struct EnsembleOptions
{
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// F(t) = (#trajectories reading Correct at t) / M. Trajectory i is
/// run_trajectory(config, policy, i). Counts are reduced with integer sums,
/// so the result is identical for any thread count.
FidelityCurve estimate_fidelity(const TrajectoryConfig& config, std::uint64_t ensemble_size,
                                ReadoutPolicy policy, EnsembleOptions options = {});

CurveMetadata make_metadata(const TrajectoryConfig& config, std::uint64_t ensemble_size, ReadoutPolicy policy);

/// Sample-time grid policy. Without an explicit t_max a pilot ensemble is
/// stepped over geometric checkpoints until the fidelity has settled at or
/// below 1/2 (within plateau_sigma standard errors) over a trailing window;
/// that time, scaled by t_max_factor, becomes t_max, and the span where the
/// pilot fidelity fell from ~1 to the plateau is refined linearly.
struct SampleGridSpec
{
    double t_min = 0.0;  ///< first nonzero time; 0 -> 1/N
    std::optional<double> t_max;
    std::size_t geometric_points = 100;
    std::size_t linear_points = 150;

    std::uint64_t pilot_ensemble = 400;
    double plateau_sigma = 3.0;
    double checkpoint_growth = 1.1;
    double window_ratio = 1.5;
    double t_max_factor = 2.0;
};

struct SampleGrid
{
    std::vector<double> times;  ///< ascending, starts at 0, each a multiple of 1/N
    double decay_begin = 0.0;
    double decay_end = 0.0;
    /// Step budget reached before the pilot saw the plateau.
    bool truncated = false;
};

SampleGrid plan_sample_times(const TrajectoryConfig& config, const SampleGridSpec& spec, ReadoutPolicy policy,
                             EnsembleOptions options = {});

}  // namespace isingmem
