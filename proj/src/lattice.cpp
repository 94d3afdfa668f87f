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

#include "isingmem/lattice.hpp"

#include <numeric>
#include <string>

namespace isingmem {

Geometry::Geometry(Dimension dim, std::uint32_t side_length)
    : dim_(dim), side_(side_length), n_(0), stride_(dim == Dimension::One ? 2 : 4)
{
    if (dim != Dimension::One && dim != Dimension::Two)
        throw std::invalid_argument("dimension must be 1 or 2");
    if (side_length < 1)
        throw std::invalid_argument("side length must be at least 1");
    if (dim == Dimension::Two && side_length > 65535)
        throw std::invalid_argument("side length too large");

    n_ = dim == Dimension::One ? side_length : side_length * side_length;
    neighbors_.assign(std::size_t{n_} * stride_, n_);

    if (dim == Dimension::One)
    {
        for (std::uint32_t i = 0; i < n_; ++i)
        {
            auto* row = neighbors_.data() + std::size_t{i} * 2;
            if (i > 0)
                row[0] = i - 1;
            if (i + 1 < n_)
                row[1] = i + 1;
        }
        return;
    }

    const std::uint32_t L = side_length;
    for (std::uint32_t r = 0; r < L; ++r)
    {
        for (std::uint32_t c = 0; c < L; ++c)
        {
            const std::uint32_t i = r * L + c;
            auto* row = neighbors_.data() + std::size_t{i} * 4;
            if (r > 0)
                row[0] = i - L;
            if (c > 0)
                row[1] = i - 1;
            if (c + 1 < L)
                row[2] = i + 1;
            if (r + 1 < L)
                row[3] = i + L;
        }
    }
}

std::vector<std::uint32_t> Geometry::neighbors(std::uint32_t site) const
{
    if (site >= n_)
        throw std::out_of_range("site index out of range");
    std::vector<std::uint32_t> out;
    for (auto j : padded_neighbors(site))
    {
        if (j != n_)
            out.push_back(j);
    }
    return out;
}

std::uint64_t Geometry::bond_count() const
{
    if (dim_ == Dimension::One)
        return n_ - 1;
    return 2ull * side_ * (side_ - 1);
}

const char* to_string(TieRule rule)
{
    return rule == TieRule::RandomChoice ? "RandomChoice" : "DeclareFailure";
}

TieRule parse_tie_rule(std::string_view text)
{
    if (text == "RandomChoice" || text == "random")
        return TieRule::RandomChoice;
    if (text == "DeclareFailure" || text == "failure")
        return TieRule::DeclareFailure;
    throw std::invalid_argument("unknown tie rule: " + std::string(text));
}

SpinState::SpinState(Geometry geometry)
    : geometry_(std::move(geometry)), spins_(geometry_.site_count(), Spin{1})
{
}

SpinState::SpinState(Geometry geometry, std::vector<Spin> spins)
    : geometry_(std::move(geometry)), spins_(std::move(spins))
{
    if (spins_.size() != geometry_.site_count())
        throw std::invalid_argument("spin count does not match geometry");
    for (auto s : spins_)
    {
        if (s != 1 && s != -1)
            throw std::invalid_argument("spins must be +1 or -1");
    }
}

void SpinState::flip(std::uint32_t site)
{
    if (site >= spins_.size())
        throw std::out_of_range("site index out of range");
    spins_[site] = static_cast<Spin>(-spins_[site]);
}

void SpinState::set(std::uint32_t site, Spin value)
{
    if (site >= spins_.size())
        throw std::out_of_range("site index out of range");
    if (value != 1 && value != -1)
        throw std::invalid_argument("spins must be +1 or -1");
    spins_[site] = value;
}

SpinState encode(const Geometry& geometry, int bit)
{
    if (bit != 0 && bit != 1)
        throw std::invalid_argument("encoded bit must be 0 or 1");
    return {geometry, std::vector<Spin>(geometry.site_count(), bit == 1 ? Spin{1} : Spin{-1})};
}

double total_energy(const SpinState& state, const Couplings& couplings)
{
    const auto& g = state.geometry();
    const auto spins = state.spins();
    std::int64_t bond_sum = 0;
    std::int64_t field_sum = 0;
    for (std::uint32_t i = 0; i < g.site_count(); ++i)
    {
        field_sum += spins[i];
        // Each bond is counted once from its lower-indexed end.
        for (auto j : g.padded_neighbors(i))
        {
            if (j != g.sentinel() && j > i)
                bond_sum += spins[i] * spins[j];
        }
    }
    return -couplings.J * static_cast<double>(bond_sum) - couplings.h * static_cast<double>(field_sum);
}

double delta_energy(const SpinState& state, std::uint32_t site, const Couplings& couplings)
{
    const auto& g = state.geometry();
    if (site >= g.site_count())
        throw std::out_of_range("site index out of range");
    const auto spins = state.spins();
    int local = 0;
    for (auto j : g.padded_neighbors(site))
    {
        if (j != g.sentinel())
            local += spins[j];
    }
    return 2.0 * spins[site] * (couplings.J * local + couplings.h);
}

std::int64_t magnetization(const SpinState& state)
{
    const auto spins = state.spins();
    return std::accumulate(spins.begin(), spins.end(), std::int64_t{0});
}

}  // namespace isingmem
