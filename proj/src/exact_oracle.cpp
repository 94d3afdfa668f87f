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

#include "isingmem/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isingmem {

namespace {

void check_cap(const Geometry& geometry, std::uint32_t cap)
{
    if (cap > 30)
        throw std::invalid_argument("exact site cap must not exceed 30");
    if (geometry.site_count() > cap)
        throw std::invalid_argument("lattice has " + std::to_string(geometry.site_count()) +
                                    " sites, above the exact-oracle cap of " + std::to_string(cap));
}

std::int64_t index_magnetization(ConfigIndex index, std::uint32_t n)
{
    const auto up = static_cast<std::int64_t>(std::popcount(index));
    return 2 * up - static_cast<std::int64_t>(n);
}

}  // namespace

SpinState state_from_index(const Geometry& geometry, ConfigIndex index)
{
    std::vector<Spin> spins(geometry.site_count());
    for (std::uint32_t i = 0; i < geometry.site_count(); ++i)
        spins[i] = (index >> i) & 1u ? Spin{1} : Spin{-1};
    return {geometry, std::move(spins)};
}

ConfigIndex index_from_state(const SpinState& state)
{
    ConfigIndex index = 0;
    for (std::uint32_t i = 0; i < state.size(); ++i)
    {
        if (state[i] > 0)
            index |= ConfigIndex{1} << i;
    }
    return index;
}

ExactDistribution ExactDistribution::point_mass(const Geometry& geometry, ConfigIndex index)
{
    ExactDistribution d{geometry, std::vector<double>(std::size_t{1} << geometry.site_count(), 0.0)};
    d.probabilities.at(index) = 1.0;
    return d;
}

double ExactDistribution::total() const
{
    double sum = 0.0;
    for (double p : probabilities)
        sum += p;
    return sum;
}

TransitionOperator::TransitionOperator(const Geometry& geometry, const Couplings& couplings,
                                       const Temperature& temperature, std::uint32_t site_cap)
    : geometry_(geometry)
{
    check_cap(geometry, site_cap);
    const std::uint32_t n = geometry.site_count();
    const std::size_t states = std::size_t{1} << n;
    flip_.resize(states * n);
    for (std::size_t index = 0; index < states; ++index)
    {
        const auto state = state_from_index(geometry, static_cast<ConfigIndex>(index));
        for (std::uint32_t site = 0; site < n; ++site)
            flip_[index * n + site] = flip_probability(delta_energy(state, site, couplings), temperature.kT());
    }
}

void TransitionOperator::apply(std::span<const double> in, std::span<double> out) const
{
    const std::uint32_t n = geometry_.site_count();
    const std::size_t states = state_count();
    if (in.size() != states || out.size() != states)
        throw std::invalid_argument("distribution size does not match operator");
    std::fill(out.begin(), out.end(), 0.0);
    const double choose = 1.0 / n;
    for (std::size_t a = 0; a < states; ++a)
    {
        const double mass = in[a];
        if (mass == 0.0)
            continue;
        const double* row = flip_.data() + a * n;
        double stay = 0.0;
        for (std::uint32_t site = 0; site < n; ++site)
        {
            const double p = row[site];
            out[a ^ (std::size_t{1} << site)] += mass * choose * p;
            stay += choose * (1.0 - p);
        }
        out[a] += mass * stay;
    }
}

ExactDistribution TransitionOperator::apply(const ExactDistribution& dist) const
{
    ExactDistribution out{dist.geometry, std::vector<double>(dist.probabilities.size())};
    apply(dist.probabilities, out.probabilities);
    return out;
}

std::vector<double> TransitionOperator::dense() const
{
    const std::uint32_t n = geometry_.site_count();
    if (n > kDenseSiteLimit)
        throw std::invalid_argument("dense operator limited to 12 sites");
    const std::size_t states = state_count();
    std::vector<double> matrix(states * states, 0.0);
    for (std::size_t a = 0; a < states; ++a)
    {
        double stay = 0.0;
        for (std::uint32_t site = 0; site < n; ++site)
        {
            const double p = flip_[a * n + site];
            matrix[a * states + (a ^ (std::size_t{1} << site))] += p / n;
            stay += (1.0 - p) / n;
        }
        matrix[a * states + a] += stay;
    }
    return matrix;
}

ExactDistribution boltzmann_distribution(const Geometry& geometry, const Couplings& couplings,
                                         const Temperature& temperature)
{
    check_cap(geometry, kDefaultExactSiteCap);
    const std::size_t states = std::size_t{1} << geometry.site_count();
    std::vector<double> energy(states);
    double e_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states; ++i)
    {
        energy[i] = total_energy(state_from_index(geometry, static_cast<ConfigIndex>(i)), couplings);
        e_min = std::min(e_min, energy[i]);
    }
    ExactDistribution d{geometry, std::vector<double>(states)};
    double z = 0.0;
    for (std::size_t i = 0; i < states; ++i)
    {
        d.probabilities[i] = std::exp(-(energy[i] - e_min) / temperature.kT());
        z += d.probabilities[i];
    }
    for (double& p : d.probabilities)
        p /= z;
    return d;
}

double majority_correct_probability(const ExactDistribution& dist, int encoded_bit, TieRule ties)
{
    const std::uint32_t n = dist.geometry.site_count();
    double correct = 0.0;
    for (std::size_t i = 0; i < dist.probabilities.size(); ++i)
    {
        const auto m = index_magnetization(static_cast<ConfigIndex>(i), n);
        if (m == 0)
        {
            if (ties == TieRule::RandomChoice)
                correct += 0.5 * dist.probabilities[i];
        }
        else if ((m > 0) == (encoded_bit == 1))
        {
            correct += dist.probabilities[i];
        }
    }
    return correct;
}

FidelityCurve exact_fidelity(const Geometry& geometry, const Couplings& couplings, const Temperature& temperature,
                             std::span<const double> sample_times, ReadoutPolicy policy, int encoded_bit,
                             std::uint32_t site_cap)
{
    if (encoded_bit != 0 && encoded_bit != 1)
        throw std::invalid_argument("encoded bit must be 0 or 1");
    const TransitionOperator op(geometry, couplings, temperature, site_cap);
    const std::uint32_t n = geometry.site_count();
    const ConfigIndex start = encoded_bit == 1 ? static_cast<ConfigIndex>((std::size_t{1} << n) - 1) : 0;
    auto dist = ExactDistribution::point_mass(geometry, start);
    std::vector<double> scratch(dist.probabilities.size());

    FidelityCurve curve;
    curve.metadata.dimension = geometry.dimension_value();
    curve.metadata.side_length = geometry.side_length();
    curve.metadata.site_count = n;
    curve.metadata.kT = temperature.kT();
    curve.metadata.J = couplings.J;
    curve.metadata.h = couplings.h;
    curve.metadata.tie_rule = policy.tie_rule;
    curve.metadata.encoded_bit = encoded_bit;
    curve.metadata.exact = true;

    std::uint64_t done = 0;
    double previous = -1.0;
    for (double t : sample_times)
    {
        if (!(t > previous))
            throw std::invalid_argument("sample times must be strictly ascending and nonnegative");
        previous = t;
        const auto target = steps_for_time(t, n);
        for (; done < target; ++done)
        {
            op.apply(dist.probabilities, scratch);
            dist.probabilities.swap(scratch);
        }
        curve.times.push_back(t);
        curve.fidelity.push_back(majority_correct_probability(dist, encoded_bit, policy.tie_rule));
        curve.sigma.push_back(0.0);
    }
    return curve;
}

double stationarity_residual(const TransitionOperator& op, const ExactDistribution& dist)
{
    const auto next = op.apply(dist);
    double worst = 0.0;
    for (std::size_t i = 0; i < next.probabilities.size(); ++i)
        worst = std::max(worst, std::abs(next.probabilities[i] - dist.probabilities[i]));
    return worst;
}

PowerIterationResult power_iteration(const TransitionOperator& op, double tolerance, std::size_t max_iterations)
{
    const std::size_t states = op.state_count();
    PowerIterationResult result{
        ExactDistribution{op.geometry(), std::vector<double>(states, 1.0 / static_cast<double>(states))}};
    std::vector<double> next(states);
    for (std::size_t k = 0; k < max_iterations; ++k)
    {
        op.apply(result.distribution.probabilities, next);
        double total = 0.0;
        for (double p : next)
            total += p;
        double worst = 0.0;
        for (std::size_t i = 0; i < states; ++i)
        {
            next[i] /= total;
            worst = std::max(worst, std::abs(next[i] - result.distribution.probabilities[i]));
        }
        result.distribution.probabilities.swap(next);
        result.eigenvalue = total;
        result.residual = worst;
        result.iterations = k + 1;
        if (worst <= tolerance)
            break;
    }
    return result;
}

}  // namespace isingmem
