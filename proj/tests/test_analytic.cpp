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

#include "doctest.h"

#include <cmath>
#include <vector>

#include "isingmem/analytic.hpp"

using namespace isingmem;

namespace {

// Sum over all 2^n flip-parity patterns of independent spins.
double brute_force_fidelity(std::uint32_t n, double lambda, double t, TieRule ties)
{
    const double q = odd_flip_probability(lambda, t);
    double f = 0.0;
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << n); ++pattern)
    {
        const int flipped = __builtin_popcountll(pattern);
        const double weight = std::pow(q, flipped) * std::pow(1.0 - q, static_cast<int>(n) - flipped);
        if (2 * flipped < static_cast<int>(n))
            f += weight;
        else if (2 * flipped == static_cast<int>(n) && ties == TieRule::RandomChoice)
            f += 0.5 * weight;
    }
    return f;
}

std::vector<double> dense_times(double t_max, std::size_t count)
{
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = t_max * static_cast<double>(i) / static_cast<double>(count - 1);
    return t;
}

}  // namespace

TEST_CASE("odd-flip probability")
{
    CHECK(odd_flip_probability(0.5, 0.0) == 0.0);
    CHECK(odd_flip_probability(0.5, 1.0) == doctest::Approx(0.31606027941427883).epsilon(1e-14));
    CHECK(odd_flip_probability(0.5, 1e4) == doctest::Approx(0.5));
    CHECK(odd_flip_probability(1e-3, 1e-9) == doctest::Approx(1e-12).epsilon(1e-6));
}

TEST_CASE("binomial law: boundary values")
{
    for (std::uint64_t n : {1u, 2u, 7u, 100u, 4001u})
        CHECK(binomial_fidelity(n, 0.3, 0.0) == 1.0);
    for (double t : {0.1, 1.0, 3.7})
        CHECK(binomial_fidelity(1, 0.2, t) == doctest::Approx(0.5 * (1.0 + std::exp(-0.4 * t))).epsilon(1e-14));
    CHECK(binomial_fidelity(1, 0.5, 1e6) == doctest::Approx(0.5));
    CHECK(binomial_fidelity(101, 0.5, 1e6) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(binomial_fidelity(0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("binomial law equals the brute-force parity sum for N <= 12")
{
    for (std::uint32_t n = 1; n <= 12; ++n)
    {
        for (double t : {0.0, 0.05, 0.3, 1.0, 2.5, 10.0})
        {
            for (double lambda : {0.5, 0.17, 0.01})
            {
                for (TieRule ties : {TieRule::DeclareFailure, TieRule::RandomChoice})
                {
                    const double expected = brute_force_fidelity(n, lambda, t, ties);
                    REQUIRE(binomial_fidelity(n, lambda, t, ties) == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("binomial law: long-time limit is the fair-coin majority probability")
{
    // Even n with ties counted as failures: (1 - C(n, n/2) 2^-n) / 2.
    CHECK(binomial_fidelity(2, 0.5, 1e3) == doctest::Approx(0.25));
    CHECK(binomial_fidelity(4, 0.5, 1e3) == doctest::Approx(0.5 * (1.0 - 6.0 / 16.0)));
    CHECK(binomial_fidelity(4, 0.5, 1e3, TieRule::RandomChoice) == doctest::Approx(0.5));
    CHECK(binomial_fidelity(100, 0.5, 1e3, TieRule::RandomChoice) == doctest::Approx(0.5));
}

TEST_CASE("binomial law stays finite and accurate for large N")
{
    const double f = binomial_fidelity(20000, 0.1, 1.0);
    CHECK(std::isfinite(f));
    CHECK(f == doctest::Approx(1.0));
    // Deep in the decay the sum must still be a probability.
    for (double t : dense_times(30.0, 301))
    {
        const double g = binomial_fidelity(20001, 0.1, t);
        CHECK(g >= 0.5 - 1e-12);
        CHECK(g <= 1.0 + 1e-12);
    }
}

TEST_CASE("models are monotone non-increasing in time")
{
    const auto times = dense_times(40.0, 2001);
    for (std::uint64_t n : {1u, 2u, 11u, 100u, 399u})
    {
        double prev = 1.0;
        for (double t : times)
        {
            const double f = binomial_fidelity(n, 0.1, t);
            REQUIRE(f <= prev + 1e-14);
            prev = f;
        }
    }
    for (double n_eff : {0.3, 1.0, 5.37, 46.7, 399.0})
    {
        double prev = 1.0;
        for (double t : times)
        {
            const double f = gaussian_fidelity({n_eff, 0.1}, t);
            REQUIRE(f <= prev + 1e-15);
            prev = f;
        }
    }
}

TEST_CASE("Gaussian model: limits and closed form")
{
    CHECK(gaussian_fidelity({46.7, 0.17}, 0.0) == 1.0);
    CHECK(gaussian_fidelity({46.7, 0.17}, 1e4) == doctest::Approx(0.5));
    CHECK(gaussian_model_argument({46.7, 0.17}, 1e4) == doctest::Approx(0.0));
    for (double t : {0.1, 1.0, 5.0, 20.0})
    {
        const ModelParams p{12.0, 0.3};
        const double u = std::exp(-2.0 * p.lambda * t);
        const double mu = p.n_eff * (1.0 - u) / 2.0;
        const double sigma = std::sqrt(p.n_eff * (1.0 - u) * (1.0 + u)) / 2.0;
        const double direct = 0.5 * (1.0 + std::erf((p.n_eff / 2.0 - mu) / (std::sqrt(2.0) * sigma)));
        CHECK(gaussian_fidelity(p, t) == doctest::Approx(direct).epsilon(1e-13));
        CHECK(0.5 * std::erfc(-gaussian_model_argument(p, t)) == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian model depends on lambda and t only through their product")
{
    for (double c : {0.01, 0.5, 3.0, 170.0})
    {
        for (double t : {0.2, 1.0, 4.0, 13.0})
        {
            const ModelParams base{46.7, 0.1707};
            const ModelParams scaled{46.7, 0.1707 * c};
            CHECK(gaussian_fidelity(scaled, t / c) == doctest::Approx(gaussian_fidelity(base, t)).epsilon(1e-12));
        }
    }
}

TEST_CASE("smaller effective spin count decays earlier relative to its plateau")
{
    const ModelParams big{399.0, 0.1};
    const ModelParams small{11.0, 0.1};
    // Time at which each curve first falls below 0.9.
    auto crossing = [](const ModelParams& p) {
        double t = 0.0;
        while (gaussian_fidelity(p, t) > 0.9)
            t += 1e-3;
        return t;
    };
    CHECK(crossing(small) < crossing(big));
    CHECK(gaussian_fidelity(small, 1.0) < gaussian_fidelity(big, 1.0));
}

TEST_CASE("exponential single-spin law")
{
    CHECK(exponential_fidelity(0.5, 0.0) == 1.0);
    CHECK(exponential_fidelity(0.5, 1.0) == doctest::Approx(0.5 * (1.0 + std::exp(-1.0))));
    CHECK(exponential_fidelity(0.5, 1e5) == doctest::Approx(0.5));
}

TEST_CASE("binomial vs Gaussian gap")
{
    const auto times = dense_times(60.0, 6001);
    double max_gap_large = 0.0;
    for (double t : times)
    {
        CHECK(binomial_vs_gaussian_gap(399, 0.1, 0.0) == 0.0);
        max_gap_large = std::max(max_gap_large, binomial_vs_gaussian_gap(399, 0.1, t));
    }
    CHECK(max_gap_large < 0.01);

    // Compare where each Gaussian curve sits at F ~ 0.75.
    auto time_at = [](double n_eff, double level) {
        double t = 0.0;
        while (gaussian_fidelity({n_eff, 0.1}, t) > level)
            t += 1e-4;
        return t;
    };
    const double gap_small = binomial_vs_gaussian_gap(11, 0.1, time_at(11.0, 0.75));
    const double gap_large = binomial_vs_gaussian_gap(399, 0.1, time_at(399.0, 0.75));
    CHECK(gap_small > gap_large);
}
