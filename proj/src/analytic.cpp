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

#include "isingmem/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isingmem {

namespace {

void check_rate_time(double lambda, double t)
{
    if (!(lambda >= 0.0) || !(t >= 0.0))
        throw std::invalid_argument("lambda and t must be nonnegative");
}

// Compensated running sum.
class Neumaier
{
  public:
    void add(double v)
    {
        const double s = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - s) + v;
        else
            comp_ += (v - s) + sum_;
        sum_ = s;
    }
    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

double odd_flip_probability(double lambda, double t)
{
    check_rate_time(lambda, t);
    return -0.5 * std::expm1(-2.0 * lambda * t);
}

double binomial_fidelity(std::uint64_t n, double lambda, double t, TieRule ties)
{
    if (n == 0)
        throw std::invalid_argument("N must be at least 1");
    const double p = odd_flip_probability(lambda, t);
    if (p == 0.0)
        return 1.0;

    // Binomial(N, p) weights relative to the mode, built by the ratio
    // recurrence. F = 1 - failures / total, so a shared scale error cancels
    // and the small failure tail near F = 1 keeps its relative accuracy.
    const double nn = static_cast<double>(n);
    const double rho = p / (1.0 - p);
    const std::uint64_t mode = std::min<std::uint64_t>(n, static_cast<std::uint64_t>((nn + 1.0) * p));
    const std::uint64_t strict_max = (n - 1) / 2;  // largest k with k < N/2
    const bool has_tie = n % 2 == 0;
    const double tie_failure = ties == TieRule::RandomChoice ? 0.5 : 1.0;

    Neumaier total;
    Neumaier failures;
    auto add = [&](std::uint64_t k, double w) {
        total.add(w);
        if (k > strict_max)
            failures.add(has_tie && k == n / 2 ? tie_failure * w : w);
    };
    constexpr double kNegligible = 1e-30;
    add(mode, 1.0);
    double w = 1.0;
    for (std::uint64_t k = mode; k < n && w > kNegligible; ++k)
    {
        w *= (nn - static_cast<double>(k)) / static_cast<double>(k + 1) * rho;
        add(k + 1, w);
    }
    w = 1.0;
    for (std::uint64_t k = mode; k > 0 && w > kNegligible; --k)
    {
        w *= static_cast<double>(k) / (nn - static_cast<double>(k) + 1.0) / rho;
        add(k - 1, w);
    }
    return std::clamp(1.0 - failures.value() / total.value(), 0.0, 1.0);
}

double gaussian_model_argument(const ModelParams& params, double t)
{
    check_rate_time(params.lambda, t);
    if (!(params.n_eff > 0.0))
        throw std::invalid_argument("N_eff must be positive");
    const double x = 2.0 * params.lambda * t;
    if (x == 0.0)
        return std::numeric_limits<double>::infinity();
    const double u = std::exp(-x);
    const double one_minus_u2 = -std::expm1(-2.0 * x);
    return std::sqrt(0.5 * params.n_eff) * u / std::sqrt(one_minus_u2);
}

double gaussian_fidelity(const ModelParams& params, double t)
{
    const double z = gaussian_model_argument(params, t);
    if (std::isinf(z))
        return 1.0;
    return 0.5 * std::erfc(-z);
}

double exponential_fidelity(double lambda, double t)
{
    check_rate_time(lambda, t);
    return 0.5 * (1.0 + std::exp(-2.0 * lambda * t));
}

double binomial_vs_gaussian_gap(std::uint64_t n, double lambda, double t)
{
    return std::abs(binomial_fidelity(n, lambda, t) -
                    gaussian_fidelity({static_cast<double>(n), lambda}, t));
}

}  // namespace isingmem
