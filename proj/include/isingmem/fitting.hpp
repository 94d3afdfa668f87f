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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include "isingmem/analytic.hpp"
#include "isingmem/fidelity.hpp"

namespace isingmem {

enum class ModelKind { GaussianTwoParam, ExponentialOneParam };
enum class CiMethod { Profile, Linearized };

const char* to_string(ModelKind kind);
const char* to_string(CiMethod method);
ModelKind parse_model_kind(const std::string& text);
CiMethod parse_ci_method(const std::string& text);

/// Delta chi^2 bounding a 90% interval for one parameter.
inline constexpr double kDeltaChi2For90 = 2.705543454095404;
/// Two-sided 90% normal quantile.
inline constexpr double kZ90 = 1.6448536269514722;

/// Raised when a curve shows no resolvable decay, so the model parameters
/// are not identifiable.
class NoDecayError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct Interval
{
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double x) const { return lower <= x && x <= upper; }
};

struct ModelFit
{
    ModelKind kind = ModelKind::GaussianTwoParam;
    /// For the exponential model n_eff is fixed at 1.
    ModelParams params;
    double n_eff_ci90 = 0.0;  ///< half-width; 0 for the exponential model
    double lambda_ci90 = 0.0;
    Interval n_eff_interval;
    Interval lambda_interval;
    CiMethod ci_method = CiMethod::Profile;
    double chi2 = 0.0;
    std::size_t dof = 0;
    std::size_t points = 0;
    bool converged = false;
    std::size_t iterations = 0;
    double t_first = 0.0;  ///< fitted time range
    double t_last = 0.0;

    double reduced_chi2() const { return dof > 0 ? chi2 / static_cast<double>(dof) : 0.0; }
    /// N_eff below one spin is outside the model's physical range.
    bool unphysical() const { return kind == ModelKind::GaussianTwoParam && params.n_eff < 1.0; }
    std::size_t free_parameters() const { return kind == ModelKind::GaussianTwoParam ? 2 : 1; }
};

struct ChiSquared
{
    double chi2 = 0.0;
    std::size_t dof = 0;
};

/// sum_t (F_data - F_model)^2 / sigma^2; dof = points - free_parameters.
/// Throws std::invalid_argument on an empty curve or any sigma <= 0.
ChiSquared chi_squared(const FidelityCurve& curve, const std::function<double(double)>& model,
                       std::size_t free_parameters);

struct FitOptions
{
    std::size_t max_iterations = 500;
    double tolerance = 1e-12;
    bool profile_intervals = true;
};

/// True when at least three points lie strictly inside the decay, i.e.
/// more than two standard errors below 1 and above the curve minimum.
bool has_resolved_decay(const FidelityCurve& curve);

/// Weighted least squares of the Gaussian model over (N_eff, lambda),
/// optimized in (log N_eff, log lambda) by Levenberg-Marquardt from four
/// starts (N_eff0 in {1, N/10, N/2, N}, lambda0 matched to where the data
/// cross 0.9). Intervals come from the profile chi^2 (+2.706), falling back
/// to the linearized covariance when profiling fails.
ModelFit fit_gaussian_model(const FidelityCurve& curve, std::uint32_t lattice_size, const FitOptions& options = {});

/// One-parameter fit of (1 + e^{-2 lambda t}) / 2.
ModelFit fit_exponential_model(const FidelityCurve& curve, const FitOptions& options = {});

struct LinearFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double slope_sigma = 0.0;      ///< from the weights alone
    double intercept_sigma = 0.0;
    /// 90% half-widths, inflated by sqrt(chi2/dof) when that exceeds one.
    double slope_ci90 = 0.0;
    double intercept_ci90 = 0.0;
    double chi2 = 0.0;
    std::size_t dof = 0;
    bool through_origin = false;

    bool slope_consistent_with(double value) const { return std::abs(slope - value) <= slope_ci90; }
};

/// Weighted straight line y = a + b x. Needs at least two points and
/// positive errors.
LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys, std::span<const double> y_errors);

/// Weighted line through the origin, y = m x. Needs at least one point.
LinearFit fit_proportional(std::span<const double> xs, std::span<const double> ys,
                           std::span<const double> y_errors);

enum class LambdaScaling { Exponential, Subexponential, Inconclusive };
const char* to_string(LambdaScaling scaling);

struct ScalingClassification
{
    LambdaScaling verdict = LambdaScaling::Inconclusive;
    LinearFit exponential;  ///< log lambda vs N
    LinearFit power_law;    ///< log lambda vs log N
    /// chi2(power law) - chi2(exponential); positive favors exponential.
    double delta_chi2 = 0.0;
};

inline constexpr double kDefaultScalingThreshold = 2.0;

/// Compares exponential (log lambda linear in N) against power-law
/// (log lambda linear in log N) decay of lambda with N by weighted chi^2.
/// Requires at least four points and lambda > 0.
ScalingClassification classify_lambda_scaling(std::span<const double> sizes, std::span<const double> lambdas,
                                              std::span<const double> lambda_errors,
                                              double threshold = kDefaultScalingThreshold);

}  // namespace isingmem
