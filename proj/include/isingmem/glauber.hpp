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

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "isingmem/lattice.hpp"
#include "isingmem/rng.hpp"

namespace isingmem {

/// Onsager's critical temperature of the 2D square lattice, kT_c / J = 2 / ln(1 + sqrt 2).
inline constexpr double kCriticalTemperature2D = 2.269185314213022;

/// Thermal energy kT (> 0).
class Temperature
{
  public:
    explicit Temperature(double kT);
    double kT() const { return kT_; }

  private:
    double kT_;
};

/// Glauber acceptance 1 / (1 + exp(dE / kT)). Saturates cleanly to 0 or 1.
double flip_probability(double delta_e, double kT);

/// Cumulative MC steps needed to reach physical time t: ceil(t * N).
/// Products within 1e-9 relative of an integer are snapped to it first.
std::uint64_t steps_for_time(double t, std::uint32_t site_count);

inline constexpr std::uint64_t kDefaultStepBudget = 1'000'000'000ull;

struct TrajectoryConfig
{
    Geometry geometry;
    Couplings couplings;
    Temperature temperature;
    int encoded_bit = 1;
    std::uint64_t master_seed = 0;
    std::vector<double> sample_times;
    /// Sample times needing more steps than this are not reached.
    std::uint64_t step_budget = kDefaultStepBudget;

    /// Throws std::invalid_argument on bad bit or unsorted/negative times.
    void validate() const;
};

struct TrajectoryRecord
{
    double time = 0.0;
    std::uint64_t steps = 0;
    std::int64_t magnetization = 0;
    Readout readout = Readout::Correct;
};

/// One single-spin-flip update. Consumes exactly two draws from `rng`:
/// the first picks the site, the second decides the flip. Returns whether
/// the spin was flipped.
template <class Rng>
bool mc_step(SpinState& state, const Temperature& temperature, const Couplings& couplings, Rng& rng)
{
    const std::uint32_t site = draw_index(rng(), state.size());
    const double p = flip_probability(delta_energy(state, site, couplings), temperature.kT());
    const bool flip = (rng() >> 11) < acceptance_threshold(p);
    if (flip)
        state.flip(site);
    return flip;
}

/// Table-driven Glauber engine for one trajectory. Spins live in a buffer
/// padded with a border of zeros (one cell at each end of a chain, a frame
/// around a square), so the neighbor sum is four fixed-offset loads with no
/// boundary tests. Draws are consumed in the same order and compared
/// against the same thresholds as mc_step, so both produce identical
/// trajectories from the same generator.
class GlauberKernel
{
  public:
    GlauberKernel(const Geometry& geometry, const Couplings& couplings, const Temperature& temperature);

    void reset(int encoded_bit);
    void load(const SpinState& state);

    template <class Rng>
    void advance(std::uint64_t steps, Rng& rng)
    {
        if (geometry_.dimension() == Dimension::One)
            advance_impl<false>(steps, rng);
        else
            advance_impl<true>(steps, rng);
    }

    std::int64_t magnetization() const { return magnetization_; }
    SpinState state() const;

  private:
    template <bool Square, class Rng>
    void advance_impl(std::uint64_t steps, Rng& rng)
    {
        const std::uint32_t n = n_;
        const std::ptrdiff_t row = row_;
        const std::uint32_t* cell_of = cells_.data();
        Spin* spins = spins_.data();
        std::int64_t mag = magnetization_;
        for (std::uint64_t k = 0; k < steps; ++k)
        {
            const std::uint32_t site = draw_index(rng(), n);
            Spin* cell = spins + (Square ? cell_of[site] : site + 1);
            int local = cell[-1] + cell[1];
            if constexpr (Square)
                local += cell[-row] + cell[row];
            const Spin s = *cell;
            const std::uint64_t threshold = thresholds_[(s > 0 ? 9 : 0) + local + 4];
            // Branch-free: flip outcomes are close to coin tosses near domain walls.
            const int flip = static_cast<int>((rng() >> 11) < threshold);
            *cell = static_cast<Spin>(s * (1 - 2 * flip));
            mag -= 2 * s * flip;
        }
        magnetization_ = mag;
    }

    std::size_t cell(std::uint32_t site) const
    {
        return geometry_.dimension() == Dimension::One ? site + 1 : cells_[site];
    }

    Geometry geometry_;
    std::uint32_t n_;
    std::ptrdiff_t row_ = 0;           // padded row length (2D)
    std::vector<std::uint32_t> cells_;  // site -> padded cell (2D)
    std::vector<Spin> spins_;          // padded buffer, border cells are 0
    std::int64_t magnetization_ = 0;
    std::array<std::uint64_t, 18> thresholds_{};
};

/// Runs one trajectory from encode(geometry, bit), taking ceil(t * N)
/// cumulative steps to reach each sample time and recording magnetization
/// and majority readout there. The dynamics generator is seeded from
/// derive_seed(master_seed, trajectory_index, Dynamics); RandomChoice ties
/// draw from the separate Readout stream, so the spin history does not
/// depend on the policy. Sample times beyond the step budget are omitted.
std::vector<TrajectoryRecord> run_trajectory(const TrajectoryConfig& config, ReadoutPolicy policy,
                                             std::uint64_t trajectory_index = 0);

}  // namespace isingmem
