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

#include "isingmem/lattice.hpp"

namespace isingmem {

/// Effective-spin model parameters: N_eff independent spins flipping at
/// rate lambda. N_eff may be non-integer and even below 1; callers flag
/// that as unphysical rather than rejecting it here.
struct ModelParams
{
    double n_eff = 1.0;
    double lambda = 0.5;
};

/// Probability that a spin flipping as a Poisson process of rate lambda
/// has flipped an odd number of times by t: (1 - exp(-2 lambda t)) / 2.
double odd_flip_probability(double lambda, double t);

/// Majority-vote fidelity of N independent spins. The default counts only
/// strict majorities (fewer than N/2 spins odd-flipped), matching tie
/// rule DeclareFailure; RandomChoice adds half of the tie term for even N.
/// Stable for N up to well beyond 10^4.
double binomial_fidelity(std::uint64_t n, double lambda, double t, TieRule ties = TieRule::DeclareFailure);

/// Gaussian effective-spin model:
///   F = (1 + erf((N_eff/2 - mu) / (sqrt2 sigma))) / 2,
///   mu = N_eff (1 - e^{-2 lambda t}) / 2,
///   sigma = sqrt(N_eff (1 - e^{-2 lambda t})(1 + e^{-2 lambda t})) / 2.
/// The vote threshold is the model's own spin count N_eff/2, so F decays
/// to 1/2. Returns 1 at t = 0.
double gaussian_fidelity(const ModelParams& params, double t);

/// Argument z of the Gaussian model, F = erfc(-z) / 2. Simplifies to
/// sqrt(N_eff / 2) * u / sqrt(1 - u^2) with u = exp(-2 lambda t).
double gaussian_model_argument(const ModelParams& params, double t);

/// Single-spin (N = 1) law: (1 + exp(-2 lambda t)) / 2.
double exponential_fidelity(double lambda, double t);

/// |binomial_fidelity(N, lambda, t) - gaussian_fidelity({N, lambda}, t)|.
double binomial_vs_gaussian_gap(std::uint64_t n, double lambda, double t);

}  // namespace isingmem
