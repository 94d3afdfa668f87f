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

#include "isingmem/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isingmem/parallel.hpp"

namespace isingmem {

double sigma_f(double fidelity, std::uint64_t ensemble_size)
{
    if (ensemble_size == 0)
        throw std::invalid_argument("ensemble size must be positive");
    const double m = static_cast<double>(ensemble_size);
    const double f = std::clamp(fidelity, 0.0, 1.0);
    return std::max(1.0 / (2.0 * m), std::sqrt(f * (1.0 - f) / m));
}

CurveMetadata make_metadata(const TrajectoryConfig& config, std::uint64_t ensemble_size, ReadoutPolicy policy)
{
    CurveMetadata meta;
    meta.dimension = config.geometry.dimension_value();
    meta.side_length = config.geometry.side_length();
    meta.site_count = config.geometry.site_count();
    meta.kT = config.temperature.kT();
    meta.J = config.couplings.J;
    meta.h = config.couplings.h;
    meta.ensemble_size = ensemble_size;
    meta.seed = config.master_seed;
    meta.tie_rule = policy.tie_rule;
    meta.encoded_bit = config.encoded_bit;
    return meta;
}

FidelityCurve estimate_fidelity(const TrajectoryConfig& config, std::uint64_t ensemble_size,
                                ReadoutPolicy policy, EnsembleOptions options)
{
    if (ensemble_size == 0)
        throw std::invalid_argument("ensemble size must be positive");
    config.validate();

    const std::size_t n_times = config.sample_times.size();
    std::size_t reached = 0;
    for (double t : config.sample_times)
    {
        if (steps_for_time(t, config.geometry.site_count()) > config.step_budget)
            break;
        ++reached;
    }

    const unsigned workers = resolve_threads(options.threads);
    std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(n_times, 0));
    parallel_blocks(ensemble_size, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        auto& counts = partial[w];
        for (std::size_t i = begin; i < end; ++i)
        {
            const auto records = run_trajectory(config, policy, i);
            for (std::size_t k = 0; k < records.size(); ++k)
            {
                if (records[k].readout == Readout::Correct)
                    ++counts[k];
            }
        }
    });

    FidelityCurve curve;
    curve.metadata = make_metadata(config, ensemble_size, policy);
    curve.metadata.truncated = reached < n_times;
    for (std::size_t k = 0; k < reached; ++k)
    {
        std::uint64_t correct = 0;
        for (const auto& counts : partial)
            correct += counts[k];
        const double f = static_cast<double>(correct) / static_cast<double>(ensemble_size);
        curve.times.push_back(config.sample_times[k]);
        curve.fidelity.push_back(f);
        curve.sigma.push_back(sigma_f(f, ensemble_size));
    }
    return curve;
}

namespace {

struct PilotResult
{
    double stop_time = 0.0;
    double decay_begin = 0.0;
    bool truncated = false;
};

PilotResult run_pilot(const TrajectoryConfig& config, const SampleGridSpec& spec, ReadoutPolicy policy,
                      double t_start, EnsembleOptions options)
{
    const std::uint32_t n = config.geometry.site_count();
    const std::size_t m = std::max<std::uint64_t>(spec.pilot_ensemble, 1);
    std::vector<GlauberKernel> kernels;
    std::vector<Xoshiro256> dynamics;
    std::vector<Xoshiro256> readout;
    kernels.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
    {
        kernels.emplace_back(config.geometry, config.couplings, config.temperature);
        kernels.back().reset(config.encoded_bit);
        dynamics.emplace_back(derive_seed(config.master_seed, i, Stream::PilotDynamics));
        readout.emplace_back(derive_seed(config.master_seed, i, Stream::PilotReadout));
    }

    const unsigned workers = resolve_threads(options.threads);
    std::vector<std::uint64_t> partial(workers);
    std::vector<std::pair<double, double>> history;  // (t, F)
    PilotResult result;
    std::uint64_t done = 0;
    for (double t = t_start;; t *= spec.checkpoint_growth)
    {
        const std::uint64_t target = steps_for_time(t, n);
        if (target > config.step_budget)
        {
            result.truncated = true;
            result.stop_time = static_cast<double>(config.step_budget) / n;
            return result;
        }
        std::fill(partial.begin(), partial.end(), 0);
        parallel_blocks(m, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
            for (std::size_t i = begin; i < end; ++i)
            {
                kernels[i].advance(target - done, dynamics[i]);
                if (majority_readout(kernels[i].magnetization(), config.encoded_bit, policy, readout[i]) ==
                    Readout::Correct)
                    ++partial[w];
            }
        });
        done = target;

        std::uint64_t correct = 0;
        for (auto c : partial)
            correct += c;
        const double f = static_cast<double>(correct) / static_cast<double>(m);
        history.emplace_back(t, f);
        if (f >= 0.98)
            result.decay_begin = t;

        std::size_t in_window = 0;
        bool settled = true;
        for (auto it = history.rbegin(); it != history.rend() && it->first >= t / spec.window_ratio; ++it)
        {
            ++in_window;
            if (it->second > 0.5 + spec.plateau_sigma * sigma_f(it->second, m))
                settled = false;
        }
        if (settled && in_window >= 3)
        {
            result.stop_time = t;
            return result;
        }
    }
}

void append_snapped(std::vector<std::uint64_t>& steps, double t, std::uint32_t n, std::uint64_t budget)
{
    const auto s = steps_for_time(t, n);
    if (s <= budget)
        steps.push_back(s);
}

}  // namespace

SampleGrid plan_sample_times(const TrajectoryConfig& config, const SampleGridSpec& spec, ReadoutPolicy policy,
                             EnsembleOptions options)
{
    config.validate();
    if (spec.checkpoint_growth <= 1.0 || spec.window_ratio <= 1.0 || spec.t_max_factor < 1.0)
        throw std::invalid_argument("invalid sample grid growth parameters");
    const std::uint32_t n = config.geometry.site_count();
    const double t_min = spec.t_min > 0.0 ? spec.t_min : 1.0 / n;
    const double budget_time = static_cast<double>(config.step_budget) / n;

    SampleGrid grid;
    double t_max = 0.0;
    if (spec.t_max)
    {
        if (!(*spec.t_max > t_min))
            throw std::invalid_argument("t_max must exceed t_min");
        t_max = std::min(*spec.t_max, budget_time);
        grid.truncated = *spec.t_max > budget_time;
        grid.decay_begin = 0.0;
        grid.decay_end = t_max;
    }
    else
    {
        const auto pilot = run_pilot(config, spec, policy, t_min, options);
        grid.truncated = pilot.truncated;
        grid.decay_begin = pilot.decay_begin;
        grid.decay_end = pilot.stop_time;
        t_max = std::min(spec.t_max_factor * pilot.stop_time, budget_time);
    }

    std::vector<std::uint64_t> steps{0};
    const std::size_t geo = spec.geometric_points;
    for (std::size_t i = 0; i < geo; ++i)
    {
        const double frac = geo > 1 ? static_cast<double>(i) / static_cast<double>(geo - 1) : 1.0;
        append_snapped(steps, t_min * std::pow(t_max / t_min, frac), n, config.step_budget);
    }
    const std::size_t lin = spec.linear_points;
    const double lo = grid.decay_begin;
    const double hi = std::min(grid.decay_end, t_max);
    for (std::size_t i = 1; i <= lin && hi > lo; ++i)
        append_snapped(steps, lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(lin), n,
                       config.step_budget);

    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    grid.times.reserve(steps.size());
    for (auto s : steps)
        grid.times.push_back(static_cast<double>(s) / n);
    return grid;
}

}  // namespace isingmem
