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
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace isingmem {

/// Lattice dimensionality. Only chains and square lattices are supported.
enum class Dimension : int { One = 1, Two = 2 };

/// Free-boundary chain (1D) or L x L square lattice (2D), sites indexed
/// row-major. Neighbor lists are built once at construction and padded to
/// a fixed stride with the sentinel index N, so hot loops can read a spin
/// buffer of length N + 1 whose last entry is 0.
class Geometry
{
  public:
    Geometry(Dimension dim, std::uint32_t side_length);

    static Geometry chain(std::uint32_t length) { return {Dimension::One, length}; }
    static Geometry square(std::uint32_t side) { return {Dimension::Two, side}; }

    Dimension dimension() const { return dim_; }
    int dimension_value() const { return static_cast<int>(dim_); }
    std::uint32_t side_length() const { return side_; }
    std::uint32_t site_count() const { return n_; }

    /// Slots per site in the padded neighbor table (2 in 1D, 4 in 2D).
    std::uint32_t stride() const { return stride_; }
    std::uint32_t sentinel() const { return n_; }

    /// Padded neighbor row for `site`; entries equal to sentinel() are absent.
    std::span<const std::uint32_t> padded_neighbors(std::uint32_t site) const
    {
        return {neighbors_.data() + std::size_t{site} * stride_, stride_};
    }
    std::span<const std::uint32_t> padded_table() const { return neighbors_; }

    /// Real neighbors of `site` (no sentinels).
    std::vector<std::uint32_t> neighbors(std::uint32_t site) const;

    /// Number of nearest-neighbor bonds: N - 1 in 1D, 2L(L - 1) in 2D.
    std::uint64_t bond_count() const;

    friend bool operator==(const Geometry& a, const Geometry& b)
    {
        return a.dim_ == b.dim_ && a.side_ == b.side_;
    }

  private:
    Dimension dim_;
    std::uint32_t side_;
    std::uint32_t n_;
    std::uint32_t stride_;
    std::vector<std::uint32_t> neighbors_;
};

/// Interaction constants. Every shipped experiment uses J = 1, h = 0; any
/// other field value is accepted but reported as unvalidated.
struct Couplings
{
    double J = 1.0;
    double h = 0.0;

    bool validated() const { return h == 0.0; }
};

enum class TieRule { RandomChoice, DeclareFailure };

struct ReadoutPolicy
{
    TieRule tie_rule = TieRule::DeclareFailure;
};

enum class Readout { Correct, Incorrect };

const char* to_string(TieRule rule);
TieRule parse_tie_rule(std::string_view text);

using Spin = std::int8_t;

/// Lattice configuration; each entry is exactly +1 or -1.
class SpinState
{
  public:
    /// All spins +1.
    explicit SpinState(Geometry geometry);
    SpinState(Geometry geometry, std::vector<Spin> spins);

    const Geometry& geometry() const { return geometry_; }
    std::span<const Spin> spins() const { return spins_; }
    Spin operator[](std::uint32_t site) const { return spins_[site]; }
    std::uint32_t size() const { return geometry_.site_count(); }

    void flip(std::uint32_t site);
    void set(std::uint32_t site, Spin value);

  private:
    Geometry geometry_;
    std::vector<Spin> spins_;
};

/// bit = 1 -> all +1, bit = 0 -> all -1.
SpinState encode(const Geometry& geometry, int bit);

double total_energy(const SpinState& state, const Couplings& couplings);

/// Energy change from flipping `site`; O(neighbor count).
double delta_energy(const SpinState& state, std::uint32_t site, const Couplings& couplings);

std::int64_t magnetization(const SpinState& state);

/// Majority vote on a precomputed magnetization. A zero magnetization is
/// resolved by the policy; RandomChoice consumes one draw from `rng`.
template <class Rng>
Readout majority_readout(std::int64_t magnetization_value, int encoded_bit, ReadoutPolicy policy, Rng& rng)
{
    if (magnetization_value == 0)
    {
        if (policy.tie_rule == TieRule::DeclareFailure)
            return Readout::Incorrect;
        return (rng() >> 63) == 0 ? Readout::Correct : Readout::Incorrect;
    }
    const bool up = magnetization_value > 0;
    return up == (encoded_bit == 1) ? Readout::Correct : Readout::Incorrect;
}

template <class Rng>
Readout majority_readout(const SpinState& state, int encoded_bit, ReadoutPolicy policy, Rng& rng)
{
    return majority_readout(magnetization(state), encoded_bit, policy, rng);
}

}  // namespace isingmem
