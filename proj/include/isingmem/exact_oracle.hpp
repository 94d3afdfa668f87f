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
#include <vector>

#include "isingmem/fidelity.hpp"
#include "isingmem/glauber.hpp"
#include "isingmem/lattice.hpp"

namespace isingmem {

inline constexpr std::uint32_t kDefaultExactSiteCap = 16;
inline constexpr std::uint32_t kDenseSiteLimit = 12;

/// Configuration index: bit i set <=> spin i is +1.
using ConfigIndex = std::uint32_t;

SpinState state_from_index(const Geometry& geometry, ConfigIndex index);
ConfigIndex index_from_state(const SpinState& state);

/// Probability vector over all 2^N configurations.
struct ExactDistribution
{
    Geometry geometry;
    std::vector<double> probabilities;

    static ExactDistribution point_mass(const Geometry& geometry, ConfigIndex index);
    double total() const;
};

/// Exact one-step operator of mc_step: a site is chosen with probability
/// 1/N and flipped with its Glauber probability. Acting on a distribution
/// p it returns p' with p'(b) = sum_a p(a) P(a -> b). Per-site flip
/// probabilities are tabulated once; application is matrix-free,
/// O(N 2^N) per step.
class TransitionOperator
{
  public:
    TransitionOperator(const Geometry& geometry, const Couplings& couplings, const Temperature& temperature,
                       std::uint32_t site_cap = kDefaultExactSiteCap);

    const Geometry& geometry() const { return geometry_; }
    std::size_t state_count() const { return std::size_t{1} << geometry_.site_count(); }

    /// Flip probability of `site` from configuration `index`.
    double flip_probability_at(ConfigIndex index, std::uint32_t site) const
    {
        return flip_[std::size_t{index} * geometry_.site_count() + site];
    }

    void apply(std::span<const double> in, std::span<double> out) const;
    ExactDistribution apply(const ExactDistribution& dist) const;

    /// Row-stochastic dense matrix P[a][b] = P(a -> b), row-major. Only for
    /// N <= kDenseSiteLimit.
    std::vector<double> dense() const;

  private:
    Geometry geometry_;
    std::vector<double> flip_;  // [index * N + site]
};

/// Boltzmann weights exp(-E/kT) / Z over all configurations.
ExactDistribution boltzmann_distribution(const Geometry& geometry, const Couplings& couplings,
                                         const Temperature& temperature);

/// Probability that majority readout returns `encoded_bit` under `dist`:
/// RandomChoice ties count one half, DeclareFailure ties count zero.
double majority_correct_probability(const ExactDistribution& dist, int encoded_bit, TieRule ties);

/// Exact fidelity curve: the encoded point mass is propagated through
/// ceil(t N) operator applications for each sample time. Sigma is zero and
/// metadata.exact is set.
FidelityCurve exact_fidelity(const Geometry& geometry, const Couplings& couplings, const Temperature& temperature,
                             std::span<const double> sample_times, ReadoutPolicy policy, int encoded_bit = 1,
                             std::uint32_t site_cap = kDefaultExactSiteCap);

/// Max-norm of T(p) - p.
double stationarity_residual(const TransitionOperator& op, const ExactDistribution& dist);

struct PowerIterationResult
{
    ExactDistribution distribution;
    double eigenvalue = 0.0;  ///< sum of T(p) for normalized p
    double residual = 0.0;    ///< max |T(p) - p|
    std::size_t iterations = 0;
};

/// Power iteration from the uniform distribution until the residual drops
/// below `tolerance` or `max_iterations` is hit.
PowerIterationResult power_iteration(const TransitionOperator& op, double tolerance, std::size_t max_iterations);

}  // namespace isingmem
