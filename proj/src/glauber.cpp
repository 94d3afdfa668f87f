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

#include "isingmem/glauber.hpp"

#include <stdexcept>
#include <string>

namespace isingmem {

std::uint64_t acceptance_threshold(double p)
{
    if (!(p > 0.0))
        return 0;
    if (p >= 1.0)
        return 1ull << 53;
    return static_cast<std::uint64_t>(std::ceil(p * 0x1.0p53));
}

Temperature::Temperature(double kT) : kT_(kT)
{
    if (!(kT > 0.0) || !std::isfinite(kT))
        throw std::invalid_argument("temperature must be positive and finite");
}

double flip_probability(double delta_e, double kT)
{
    if (!(kT > 0.0))
        throw std::invalid_argument("temperature must be positive");
    const double x = delta_e / kT;
    if (x >= 0.0)
    {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

std::uint64_t steps_for_time(double t, std::uint32_t site_count)
{
    if (t < 0.0 || !std::isfinite(t))
        throw std::invalid_argument("sample time must be nonnegative and finite");
    const double x = t * site_count;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, x))
        return static_cast<std::uint64_t>(nearest);
    return static_cast<std::uint64_t>(std::ceil(x));
}

void TrajectoryConfig::validate() const
{
    if (encoded_bit != 0 && encoded_bit != 1)
        throw std::invalid_argument("encoded bit must be 0 or 1");
    for (std::size_t i = 0; i < sample_times.size(); ++i)
    {
        if (!(sample_times[i] >= 0.0) || !std::isfinite(sample_times[i]))
            throw std::invalid_argument("sample times must be nonnegative");
        if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
            throw std::invalid_argument("sample times must be strictly ascending");
    }
}

GlauberKernel::GlauberKernel(const Geometry& geometry, const Couplings& couplings,
                             const Temperature& temperature)
    : geometry_(geometry), n_(geometry.site_count())
{
    const std::uint32_t L = geometry.side_length();
    if (geometry.dimension() == Dimension::One)
    {
        spins_.assign(std::size_t{n_} + 2, Spin{0});
    }
    else
    {
        row_ = static_cast<std::ptrdiff_t>(L) + 2;
        spins_.assign(static_cast<std::size_t>(row_ * row_), Spin{0});
        cells_.resize(n_);
        for (std::uint32_t r = 0; r < L; ++r)
            for (std::uint32_t c = 0; c < L; ++c)
                cells_[r * L + c] = static_cast<std::uint32_t>((r + 1) * row_ + c + 1);
    }

    // Index: (s > 0 ? 9 : 0) + local + 4 with local the neighbor spin sum.
    for (int up = 0; up < 2; ++up)
    {
        const int s = up ? 1 : -1;
        for (int local = -4; local <= 4; ++local)
        {
            const double delta_e = 2.0 * s * (couplings.J * local + couplings.h);
            thresholds_[up * 9 + local + 4] = acceptance_threshold(flip_probability(delta_e, temperature.kT()));
        }
    }
    reset(1);
}

void GlauberKernel::reset(int encoded_bit)
{
    const Spin value = encoded_bit == 1 ? Spin{1} : Spin{-1};
    for (std::uint32_t i = 0; i < n_; ++i)
        spins_[cell(i)] = value;
    magnetization_ = static_cast<std::int64_t>(n_) * value;
}

void GlauberKernel::load(const SpinState& state)
{
    if (!(state.geometry() == geometry_))
        throw std::invalid_argument("state geometry does not match kernel");
    for (std::uint32_t i = 0; i < n_; ++i)
        spins_[cell(i)] = state[i];
    magnetization_ = isingmem::magnetization(state);
}

SpinState GlauberKernel::state() const
{
    std::vector<Spin> spins(n_);
    for (std::uint32_t i = 0; i < n_; ++i)
        spins[i] = spins_[cell(i)];
    return {geometry_, std::move(spins)};
}

std::vector<TrajectoryRecord> run_trajectory(const TrajectoryConfig& config, ReadoutPolicy policy,
                                             std::uint64_t trajectory_index)
{
    config.validate();
    GlauberKernel kernel(config.geometry, config.couplings, config.temperature);
    kernel.reset(config.encoded_bit);
    Xoshiro256 dynamics(derive_seed(config.master_seed, trajectory_index, Stream::Dynamics));
    Xoshiro256 readout(derive_seed(config.master_seed, trajectory_index, Stream::Readout));

    std::vector<TrajectoryRecord> records;
    records.reserve(config.sample_times.size());
    std::uint64_t done = 0;
    for (double t : config.sample_times)
    {
        const std::uint64_t target = steps_for_time(t, config.geometry.site_count());
        if (target > config.step_budget)
            break;
        if (target > done)
        {
            kernel.advance(target - done, dynamics);
            done = target;
        }
        const auto m = kernel.magnetization();
        records.push_back({t, done, m, majority_readout(m, config.encoded_bit, policy, readout)});
    }
    return records;
}

}  // namespace isingmem
