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

#include "isingmem/analytic.hpp"
#include "isingmem/exact_oracle.hpp"
#include "isingmem/fidelity.hpp"

using namespace isingmem;

namespace {

TrajectoryConfig make_config(Geometry g, Couplings c, double kT, std::uint64_t seed, std::vector<double> times)
{
    return TrajectoryConfig{g, c, Temperature(kT), 1, seed, std::move(times)};
}

// Exact majority fidelity of n free spins (odd n) after ceil(t n) steps.
std::vector<double> free_spin_urn_fidelity(std::uint32_t n, const std::vector<double>& times)
{
    std::vector<double> p(n + 1, 0.0), q(n + 1);
    p[0] = 1.0;
    std::uint64_t done = 0;
    std::vector<double> out;
    for (double t : times)
    {
        for (const auto target = steps_for_time(t, n); done < target; ++done)
        {
            for (std::uint32_t j = 0; j <= n; ++j)
            {
                q[j] = 0.5 * p[j];
                if (j > 0)
                    q[j] += 0.5 * p[j - 1] * (n - j + 1) / n;
                if (j < n)
                    q[j] += 0.5 * p[j + 1] * (j + 1) / n;
            }
            p.swap(q);
        }
        double f = 0.0;
        for (std::uint32_t j = 0; 2 * j < n; ++j)
            f += p[j];
        out.push_back(f);
    }
    return out;
}

std::vector<double> uniform_times(double step, std::size_t count)
{
    std::vector<double> t(count);
    for (std::size_t i = 0; i < count; ++i)
        t[i] = step * static_cast<double>(i);
    return t;
}

}  // namespace

TEST_CASE("sigma_f branches")
{
    CHECK(sigma_f(1.0, 10000) == doctest::Approx(5e-5));
    CHECK(sigma_f(0.5, 10000) == doctest::Approx(5e-3));
    CHECK(sigma_f(0.0, 100) == doctest::Approx(5e-3));
    CHECK(sigma_f(0.999, 1000) == doctest::Approx(std::sqrt(0.999 * 0.001 / 1000)));
    CHECK(sigma_f(0.9999, 1000) == doctest::Approx(5e-4));
    CHECK_THROWS_AS(sigma_f(0.5, 0), std::invalid_argument);
}

TEST_CASE("curve invariants: F = 1 at t = 0, values on the 1/M grid, sigma from the counting law")
{
    const std::uint64_t m = 300;
    const auto cfg = make_config(Geometry::square(4), Couplings{}, 2.5, 17, uniform_times(1.0, 60));
    const auto curve = estimate_fidelity(cfg, m, {TieRule::RandomChoice});
    REQUIRE(curve.size() == 60);
    CHECK(curve.fidelity[0] == 1.0);
    for (std::size_t i = 0; i < curve.size(); ++i)
    {
        const double f = curve.fidelity[i];
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
        const double k = f * static_cast<double>(m);
        CHECK(std::abs(k - std::round(k)) < 1e-9);
        CHECK(curve.sigma[i] > 0.0);
        CHECK(curve.sigma[i] == sigma_f(f, m));
    }
    CHECK(curve.metadata.ensemble_size == m);
    CHECK(curve.metadata.site_count == 16);
    CHECK(curve.metadata.side_length == 4);
    CHECK(curve.metadata.dimension == 2);
    CHECK(curve.metadata.tie_rule == TieRule::RandomChoice);
    CHECK_FALSE(curve.metadata.exact);
    CHECK_FALSE(curve.metadata.truncated);
    CHECK_THROWS_AS(estimate_fidelity(cfg, 0, {}), std::invalid_argument);
}

TEST_CASE("ensemble result does not depend on the thread count")
{
    const auto cfg = make_config(Geometry::chain(30), Couplings{}, 2.0, 4, uniform_times(0.5, 80));
    const auto one = estimate_fidelity(cfg, 257, {TieRule::RandomChoice}, {1});
    for (unsigned threads : {2u, 3u, 8u})
    {
        const auto many = estimate_fidelity(cfg, 257, {TieRule::RandomChoice}, {threads});
        CHECK(many.fidelity == one.fidelity);
        CHECK(many.sigma == one.sigma);
    }
}

TEST_CASE("enlarging the ensemble keeps the first trajectories unchanged")
{
    const auto cfg = make_config(Geometry::chain(20), Couplings{}, 2.0, 9, uniform_times(1.0, 30));
    const auto small = estimate_fidelity(cfg, 100, {});
    const auto large = estimate_fidelity(cfg, 200, {});
    for (std::size_t k = 0; k < small.size(); ++k)
    {
        std::int64_t extra = 0;
        for (std::uint64_t i = 100; i < 200; ++i)
            extra += run_trajectory(cfg, {}, i)[k].readout == Readout::Correct;
        const auto count_small = std::llround(small.fidelity[k] * 100);
        const auto count_large = std::llround(large.fidelity[k] * 200);
        CHECK(count_large == count_small + extra);
    }
}

TEST_CASE("free spins follow the exact urn law and approach the binomial law")
{
    // J = 0: every step flips a uniformly chosen site with probability 1/2,
    // so the number of odd-flipped sites is an Ehrenfest urn.
    const std::uint32_t n = 101;
    const std::uint64_t m = 4000;
    const auto cfg = make_config(Geometry::chain(n), Couplings{0.0, 0.0}, 1.0, 31, uniform_times(0.05, 121));
    const auto curve = estimate_fidelity(cfg, m, {});
    const auto exact = free_spin_urn_fidelity(n, cfg.sample_times);
    double chi2 = 0.0;
    for (std::size_t i = 1; i < curve.size(); ++i)
    {
        // Error from the exact value: an observed F = 1 has only the 1/(2M)
        // floor, far below the spread of a few expected failures.
        const double r = (curve.fidelity[i] - exact[i]) / sigma_f(exact[i], m);
        chi2 += r * r;
        CHECK(std::abs(r) < 5.0);
        // Discrete steps and continuous-time Poisson flips differ only in the
        // far tail of the shoulder.
        CHECK(std::abs(exact[i] - binomial_fidelity(n, 0.5, curve.times[i])) < 5e-3);
    }
    const double reduced = chi2 / static_cast<double>(curve.size() - 1);
    // Neighboring points share trajectories, so the spread of chi2 is wide.
    CHECK(reduced > 0.4);
    CHECK(reduced < 2.0);
}

TEST_CASE("long-time fidelity settles at the equilibrium majority probability")
{
    const std::uint64_t m = 20000;
    SUBCASE("odd free chain: one half")
    {
        const auto cfg = make_config(Geometry::chain(101), Couplings{0.0, 0.0}, 1.0, 3, {0.0, 40.0});
        const auto c = estimate_fidelity(cfg, m, {});
        CHECK(std::abs(c.fidelity[1] - 0.5) <= 5.0 * c.sigma[1]);
    }
    SUBCASE("2x2 lattice, ties declared failures: exact Boltzmann value")
    {
        const Geometry g = Geometry::square(2);
        const auto cfg = make_config(g, Couplings{}, 2.5, 3, {0.0, 400.0});
        const auto c = estimate_fidelity(cfg, m, {TieRule::DeclareFailure});
        const double eq = majority_correct_probability(
            boltzmann_distribution(g, Couplings{}, Temperature(2.5)), 1, TieRule::DeclareFailure);
        CHECK(eq < 0.5);
        CHECK(std::abs(c.fidelity[1] - eq) <= 5.0 * c.sigma[1]);
    }
}

TEST_CASE("step budget truncates the curve and flags it")
{
    auto cfg = make_config(Geometry::chain(10), Couplings{}, 2.0, 1, {0.0, 1.0, 2.0, 5.0});
    cfg.step_budget = 25;
    const auto c = estimate_fidelity(cfg, 10, {});
    CHECK(c.size() == 3);
    CHECK(c.metadata.truncated);
}

TEST_CASE("planned sample grid: ordered, on the step lattice, covering the decay")
{
    const auto cfg = make_config(Geometry::chain(100), Couplings{}, 2.5, 5, {});
    SampleGridSpec spec;
    spec.pilot_ensemble = 200;
    const auto grid = plan_sample_times(cfg, spec, {TieRule::RandomChoice});
    REQUIRE(grid.times.size() > 100);
    CHECK(grid.times.front() == 0.0);
    for (std::size_t i = 1; i < grid.times.size(); ++i)
    {
        CHECK(grid.times[i] > grid.times[i - 1]);
        const double steps = grid.times[i] * 100.0;
        CHECK(std::abs(steps - std::round(steps)) < 1e-9 * steps);
    }
    CHECK_FALSE(grid.truncated);
    CHECK(grid.decay_begin < grid.decay_end);
    CHECK(grid.times.back() >= grid.decay_end);
    // The decay of this chain happens within t ~ 1..20.
    CHECK(grid.decay_end > 3.0);
    CHECK(grid.decay_end < 100.0);
    const auto tail = estimate_fidelity(make_config(Geometry::chain(100), Couplings{}, 2.5, 6, {grid.times.back()}),
                                        2000, {TieRule::RandomChoice});
    CHECK(std::abs(tail.fidelity[0] - 0.5) < 5.0 * tail.sigma[0]);
}

TEST_CASE("explicit t_max skips the pilot; grid is deterministic")
{
    const auto cfg = make_config(Geometry::square(3), Couplings{}, 2.5, 5, {});
    SampleGridSpec spec;
    spec.t_max = 50.0;
    spec.geometric_points = 20;
    spec.linear_points = 30;
    const auto a = plan_sample_times(cfg, spec, {});
    const auto b = plan_sample_times(cfg, spec, {});
    CHECK(a.times == b.times);
    CHECK(a.times.back() == doctest::Approx(50.0));
    CHECK(a.times.size() <= 51);
    spec.t_max = 0.0;
    CHECK_THROWS_AS(plan_sample_times(cfg, spec, {}), std::invalid_argument);
}

TEST_CASE("pilot reaching the step budget marks the grid truncated")
{
    auto cfg = make_config(Geometry::square(6), Couplings{}, 1.5, 5, {});
    cfg.step_budget = 36 * 200;
    SampleGridSpec spec;
    spec.pilot_ensemble = 50;
    const auto grid = plan_sample_times(cfg, spec, {});
    CHECK(grid.truncated);
    CHECK(grid.times.back() <= 200.0 + 1e-12);
}
