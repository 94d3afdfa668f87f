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

#include <algorithm>
#include <cmath>
#include <vector>

#include "isingmem/glauber.hpp"

using namespace isingmem;

TEST_CASE("flip probability values")
{
    CHECK(flip_probability(0.0, 0.3) == 0.5);
    CHECK(flip_probability(0.0, 100.0) == 0.5);
    CHECK(flip_probability(4.0, 2.0) == doctest::Approx(0.11920292202211755).epsilon(1e-14));
    CHECK(flip_probability(-4.0, 2.0) == doctest::Approx(0.8807970779778824).epsilon(1e-14));
    CHECK(flip_probability(8.0, 2.5) == doctest::Approx(0.039165722796764356).epsilon(1e-13));
    CHECK(flip_probability(4.0, 1e-6) == 0.0);
    CHECK(flip_probability(-4.0, 1e-6) == 1.0);
    CHECK(flip_probability(1e6, 1e-3) == 0.0);
    CHECK_THROWS_AS(flip_probability(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Temperature(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Temperature(0.0), std::invalid_argument);
}

TEST_CASE("flip probabilities of opposite moves sum to one and satisfy detailed balance")
{
    for (double kT : {0.05, 0.5, 1.0, 2.269, 2.5, 8.0, 100.0})
    {
        for (double de = -16.0; de <= 16.0; de += 0.5)
        {
            const double p = flip_probability(de, kT);
            const double q = flip_probability(-de, kT);
            CHECK(p + q == doctest::Approx(1.0).epsilon(1e-15));
            if (q > 1e-300 && p > 1e-300)
                CHECK(std::log(p / q) == doctest::Approx(-de / kT).epsilon(1e-12));
        }
    }
}

TEST_CASE("acceptance threshold matches the 53-bit uniform comparison")
{
    CHECK(acceptance_threshold(0.0) == 0);
    CHECK(acceptance_threshold(-1.0) == 0);
    CHECK(acceptance_threshold(1.0) == (1ull << 53));
    CHECK(acceptance_threshold(0.5) == (1ull << 52));
    Xoshiro256 rng(3);
    for (int i = 0; i < 10000; ++i)
    {
        const double p = to_unit(rng());
        const std::uint64_t x = rng();
        CHECK(((x >> 11) < acceptance_threshold(p)) == (to_unit(x) < p));
    }
}

TEST_CASE("physical time maps to ceil(t N) steps with near-integers snapped")
{
    CHECK(steps_for_time(0.0, 100) == 0);
    CHECK(steps_for_time(1.0, 100) == 100);
    CHECK(steps_for_time(0.005, 100) == 1);
    CHECK(steps_for_time(0.0151, 100) == 2);
    CHECK(steps_for_time(0.07, 100) == 7);  // 0.07 * 100 = 7.000000000000001
    CHECK(steps_for_time(2.5, 3) == 8);
    CHECK_THROWS_AS(steps_for_time(-1.0, 3), std::invalid_argument);
}

TEST_CASE("site choice is uniform so t N steps give t attempts per site")
{
    const std::uint32_t n = 37;
    std::vector<std::uint64_t> hits(n);
    Xoshiro256 rng(11);
    const double t = 2000.0;
    for (std::uint64_t k = 0; k < steps_for_time(t, n); ++k)
        ++hits[draw_index(rng(), n)];
    for (auto h : hits)
        CHECK(std::abs(static_cast<double>(h) - t) < 5.0 * std::sqrt(t));
}

TEST_CASE("non-interacting spins flip with probability one half")
{
    const Couplings free{0.0, 0.0};
    SpinState s = encode(Geometry::square(4), 1);
    CHECK(flip_probability(delta_energy(s, 5, free), 1.7) == 0.5);
    Xoshiro256 rng(5);
    int flips = 0;
    const int steps = 40000;
    for (int k = 0; k < steps; ++k)
        flips += mc_step(s, Temperature(1.7), free, rng);
    CHECK(std::abs(flips - steps / 2) < 5 * std::sqrt(steps / 4.0));
}

TEST_CASE("mc_step consumes exactly two draws")
{
    SpinState s = encode(Geometry::chain(10), 1);
    Xoshiro256 a(21), b(21);
    mc_step(s, Temperature(2.0), Couplings{}, a);
    b();
    b();
    CHECK(a() == b());
}

TEST_CASE("frozen low-temperature dynamics never raises the energy")
{
    SpinState s = encode(Geometry::square(6), 1);
    Xoshiro256 rng(1);
    for (int k = 0; k < 10000; ++k)
        CHECK_FALSE(mc_step(s, Temperature(1e-3), Couplings{}, rng));
    CHECK(magnetization(s) == 36);
}

TEST_CASE("table-driven kernel reproduces mc_step trajectories")
{
    const Couplings cases[] = {{1.0, 0.0}, {1.0, 0.3}, {0.0, 0.0}, {-0.5, 0.1}};
    for (const Geometry& g : {Geometry::chain(1), Geometry::chain(17), Geometry::square(1), Geometry::square(5)})
    {
        for (const auto& c : cases)
        {
            const Temperature kT(1.9);
            SpinState reference = encode(g, 1);
            GlauberKernel kernel(g, c, kT);
            kernel.reset(1);
            Xoshiro256 a(77), b(77);
            for (int chunk = 0; chunk < 50; ++chunk)
            {
                for (int k = 0; k < 40; ++k)
                    mc_step(reference, kT, c, a);
                kernel.advance(40, b);
                REQUIRE(kernel.magnetization() == magnetization(reference));
            }
            const SpinState got = kernel.state();
            CHECK(std::equal(got.spins().begin(), got.spins().end(), reference.spins().begin()));
            CHECK(a() == b());
        }
    }
}

TEST_CASE("kernel load restores an arbitrary state")
{
    const Geometry g = Geometry::square(3);
    SpinState s(g, {1, -1, 1, -1, -1, 1, 1, 1, -1});
    GlauberKernel kernel(g, Couplings{}, Temperature(2.0));
    kernel.load(s);
    CHECK(kernel.magnetization() == 1);
    const SpinState back = kernel.state();
    CHECK(std::equal(back.spins().begin(), back.spins().end(), s.spins().begin()));
    CHECK_THROWS_AS(kernel.load(encode(Geometry::chain(9), 1)), std::invalid_argument);
}

TEST_CASE("run_trajectory records, determinism and validation")
{
    TrajectoryConfig cfg{Geometry::chain(50), Couplings{}, Temperature(2.5), 1, 99, {0.0, 0.5, 1.0, 3.0}};
    const auto a = run_trajectory(cfg, {TieRule::RandomChoice}, 3);
    const auto b = run_trajectory(cfg, {TieRule::RandomChoice}, 3);
    REQUIRE(a.size() == 4);
    CHECK(a[0].steps == 0);
    CHECK(a[0].magnetization == 50);
    CHECK(a[0].readout == Readout::Correct);
    CHECK(a[1].steps == 25);
    CHECK(a[3].steps == 150);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        CHECK(a[i].magnetization == b[i].magnetization);
        CHECK(a[i].readout == b[i].readout);
    }

    cfg.encoded_bit = 0;
    CHECK(run_trajectory(cfg, {}, 0)[0].magnetization == -50);
    cfg.encoded_bit = 2;
    CHECK_THROWS_AS(run_trajectory(cfg, {}, 0), std::invalid_argument);
    cfg.encoded_bit = 1;
    cfg.sample_times = {1.0, 1.0};
    CHECK_THROWS_AS(run_trajectory(cfg, {}, 0), std::invalid_argument);
    cfg.sample_times = {-0.1};
    CHECK_THROWS_AS(run_trajectory(cfg, {}, 0), std::invalid_argument);
}

TEST_CASE("the spin history does not depend on the tie rule")
{
    TrajectoryConfig cfg{Geometry::square(4), Couplings{}, Temperature(3.0), 1, 5, {}};
    for (int i = 0; i <= 200; ++i)
        cfg.sample_times.push_back(i * 0.5);
    const auto coin = run_trajectory(cfg, {TieRule::RandomChoice}, 8);
    const auto strict = run_trajectory(cfg, {TieRule::DeclareFailure}, 8);
    REQUIRE(coin.size() == strict.size());
    for (std::size_t i = 0; i < coin.size(); ++i)
        CHECK(coin[i].magnetization == strict[i].magnetization);
}

TEST_CASE("step budget omits unreachable sample times")
{
    TrajectoryConfig cfg{Geometry::chain(10), Couplings{}, Temperature(2.0), 1, 1, {0.0, 1.0, 2.0, 3.0}};
    cfg.step_budget = 20;
    const auto rec = run_trajectory(cfg, {}, 0);
    REQUIRE(rec.size() == 3);
    CHECK(rec.back().steps == 20);
}

TEST_CASE("single free spin follows the two-state recursion")
{
    // Each step flips with probability 1/2, so after k >= 1 steps
    // P(correct) = (1 + 0^k) / 2 = 1/2; at k = 0 it is 1.
    TrajectoryConfig cfg{Geometry::chain(1), Couplings{0.0, 0.0}, Temperature(1.0), 1, 2024, {0.0, 1.0, 2.0, 7.0}};
    const int seeds = 20000;
    std::vector<int> correct(4);
    for (int i = 0; i < seeds; ++i)
    {
        const auto rec = run_trajectory(cfg, {}, static_cast<std::uint64_t>(i));
        for (std::size_t j = 0; j < rec.size(); ++j)
            correct[j] += rec[j].readout == Readout::Correct;
    }
    CHECK(correct[0] == seeds);
    const double tol = 5.0 * std::sqrt(seeds * 0.25);
    for (int j = 1; j < 4; ++j)
        CHECK(std::abs(correct[j] - seeds / 2.0) < tol);
}

TEST_CASE("stream derivation separates trajectories and streams")
{
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0, Stream::Dynamics) != derive_seed(1, 0, Stream::Readout));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(123, 45, Stream::Readout) == derive_seed(123, 45, Stream::Readout));
}
