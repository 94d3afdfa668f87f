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

#include "isingmem/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace isingmem {

const char* to_string(ModelKind kind)
{
    return kind == ModelKind::GaussianTwoParam ? "gaussian" : "exponential";
}

const char* to_string(CiMethod method)
{
    return method == CiMethod::Profile ? "profile" : "linearized";
}

ModelKind parse_model_kind(const std::string& text)
{
    if (text == "gaussian")
        return ModelKind::GaussianTwoParam;
    if (text == "exponential")
        return ModelKind::ExponentialOneParam;
    throw std::invalid_argument("unknown model kind: " + text);
}

CiMethod parse_ci_method(const std::string& text)
{
    if (text == "profile")
        return CiMethod::Profile;
    if (text == "linearized")
        return CiMethod::Linearized;
    throw std::invalid_argument("unknown interval method: " + text);
}

const char* to_string(LambdaScaling scaling)
{
    switch (scaling)
    {
    case LambdaScaling::Exponential:
        return "Exponential";
    case LambdaScaling::Subexponential:
        return "Subexponential";
    default:
        return "Inconclusive";
    }
}

namespace {

void check_sigmas(const FidelityCurve& curve)
{
    if (curve.size() == 0)
        throw std::invalid_argument("curve is empty");
    if (curve.fidelity.size() != curve.size() || curve.sigma.size() != curve.size())
        throw std::invalid_argument("curve columns differ in length");
    for (double s : curve.sigma)
    {
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("every sigma_F must be positive");
    }
}

// Parameters in log space; dim is 1 (log lambda) or 2 (log N_eff, log lambda).
using Vec = std::array<double, 2>;

constexpr double kLogNeffMin = -13.8;  // ~1e-6
constexpr double kLogNeffMax = 18.4;   // ~1e8
constexpr double kLogLambdaMin = -34.5;
constexpr double kLogLambdaMax = 6.9;

// Evaluates F and dF/d(log param) at one time.
class Model
{
  public:
    Model(ModelKind kind, double fixed_log_neff) : kind_(kind), fixed_log_neff_(fixed_log_neff) {}

    std::size_t dim() const { return kind_ == ModelKind::GaussianTwoParam ? 2 : 1; }

    ModelParams params(const Vec& theta) const
    {
        if (kind_ == ModelKind::GaussianTwoParam)
            return {std::exp(theta[0]), std::exp(theta[1])};
        return {std::exp(fixed_log_neff_), std::exp(theta[0])};
    }

    double value(const Vec& theta, double t) const
    {
        const auto p = params(theta);
        if (kind_ == ModelKind::GaussianTwoParam)
            return gaussian_fidelity(p, t);
        return exponential_fidelity(p.lambda, t);
    }

    // Returns F and fills grad with dF/dtheta.
    double value_and_gradient(const Vec& theta, double t, Vec& grad) const
    {
        const auto p = params(theta);
        grad = {0.0, 0.0};
        if (kind_ == ModelKind::ExponentialOneParam)
        {
            const double e = std::exp(-2.0 * p.lambda * t);
            grad[0] = -p.lambda * t * e;
            return 0.5 * (1.0 + e);
        }
        const double z = gaussian_model_argument(p, t);
        if (std::isinf(z))
            return 1.0;
        const double density = std::exp(-z * z) / std::sqrt(std::acos(-1.0));
        const double x = 2.0 * p.lambda * t;
        const double one_minus_u2 = -std::expm1(-2.0 * x);
        grad[0] = density * 0.5 * z;
        grad[1] = density * (-x * z / one_minus_u2);
        return 0.5 * std::erfc(-z);
    }

  private:
    ModelKind kind_;
    double fixed_log_neff_;
};

struct Problem
{
    const FidelityCurve& curve;
    Model model;
    // Components with mask[i] == false are held fixed.
    std::array<bool, 2> mask{true, true};

    double cost(const Vec& theta) const
    {
        double chi2 = 0.0;
        for (std::size_t i = 0; i < curve.size(); ++i)
        {
            const double r = (curve.fidelity[i] - model.value(theta, curve.times[i])) / curve.sigma[i];
            chi2 += r * r;
        }
        return chi2;
    }

    // Normal equations H = J^T J, g = J^T r with r = data - model, J = dr/dtheta.
    void normal_equations(const Vec& theta, std::array<Vec, 2>& h, Vec& g) const
    {
        h = {Vec{0.0, 0.0}, Vec{0.0, 0.0}};
        g = {0.0, 0.0};
        Vec grad;
        for (std::size_t i = 0; i < curve.size(); ++i)
        {
            const double f = model.value_and_gradient(theta, curve.times[i], grad);
            const double w = 1.0 / curve.sigma[i];
            const double r = (curve.fidelity[i] - f) * w;
            const Vec jac{-grad[0] * w, -grad[1] * w};
            for (std::size_t a = 0; a < 2; ++a)
            {
                g[a] += jac[a] * r;
                for (std::size_t b = 0; b < 2; ++b)
                    h[a][b] += jac[a] * jac[b];
            }
        }
        for (std::size_t a = 0; a < 2; ++a)
        {
            if (a >= model.dim() || !mask[a])
            {
                g[a] = 0.0;
                for (std::size_t b = 0; b < 2; ++b)
                {
                    h[a][b] = 0.0;
                    h[b][a] = 0.0;
                }
            }
        }
    }
};

Vec clamp_theta(const Model& model, Vec theta)
{
    if (model.dim() == 2)
    {
        theta[0] = std::clamp(theta[0], kLogNeffMin, kLogNeffMax);
        theta[1] = std::clamp(theta[1], kLogLambdaMin, kLogLambdaMax);
    }
    else
    {
        theta[0] = std::clamp(theta[0], kLogLambdaMin, kLogLambdaMax);
    }
    return theta;
}

// Solves (H + mu diag H) d = -g for the active components.
Vec damped_step(const std::array<Vec, 2>& h, const Vec& g, double mu, std::size_t dim, const std::array<bool, 2>& mask)
{
    std::array<Vec, 2> a = h;
    for (std::size_t i = 0; i < 2; ++i)
    {
        const double d = std::max(h[i][i], 1e-300);
        a[i][i] = h[i][i] + mu * d;
    }
    const bool two = dim == 2 && mask[0] && mask[1];
    if (two)
    {
        const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if (!(std::abs(det) > 0.0) || !std::isfinite(det))
            return {0.0, 0.0};
        return {-(a[1][1] * g[0] - a[0][1] * g[1]) / det, -(-a[1][0] * g[0] + a[0][0] * g[1]) / det};
    }
    Vec d{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i)
    {
        if (mask[i] && a[i][i] > 0.0)
            d[i] = -g[i] / a[i][i];
    }
    return d;
}

struct Minimum
{
    Vec theta{0.0, 0.0};
    double chi2 = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

Minimum levenberg_marquardt(const Problem& problem, Vec theta, const FitOptions& options)
{
    const std::size_t dim = problem.model.dim();
    theta = clamp_theta(problem.model, theta);
    double chi2 = problem.cost(theta);
    double mu = 1e-3;
    Minimum out;
    for (std::size_t iter = 0; iter < options.max_iterations; ++iter)
    {
        out.iterations = iter + 1;
        std::array<Vec, 2> h;
        Vec g;
        problem.normal_equations(theta, h, g);
        bool accepted = false;
        Vec step{0.0, 0.0};
        double trial_chi2 = chi2;
        while (mu < 1e16)
        {
            step = damped_step(h, g, mu, dim, problem.mask);
            const Vec trial = clamp_theta(problem.model, {theta[0] + step[0], theta[1] + step[1]});
            trial_chi2 = problem.cost(trial);
            if (std::isfinite(trial_chi2) && trial_chi2 <= chi2)
            {
                step = {trial[0] - theta[0], trial[1] - theta[1]};
                theta = trial;
                accepted = true;
                mu = std::max(mu / 3.0, 1e-12);
                break;
            }
            mu *= 4.0;
        }
        if (!accepted)
        {
            // No downhill step at any damping: stationary to working precision.
            out.converged = true;
            break;
        }
        const double decrease = chi2 - trial_chi2;
        chi2 = trial_chi2;
        const double step_size = std::max(std::abs(step[0]), std::abs(step[1]));
        if (decrease <= options.tolerance * (1.0 + chi2) && step_size <= 1e-7)
        {
            out.converged = true;
            break;
        }
    }
    out.theta = theta;
    out.chi2 = chi2;
    return out;
}

// Inverse of the 2x2 (or 1x1) normal matrix; nullopt if singular.
std::optional<std::array<Vec, 2>> covariance(const Problem& problem, const Vec& theta)
{
    std::array<Vec, 2> h;
    Vec g;
    problem.normal_equations(theta, h, g);
    if (problem.model.dim() == 1)
    {
        if (!(h[0][0] > 0.0))
            return std::nullopt;
        return std::array<Vec, 2>{Vec{1.0 / h[0][0], 0.0}, Vec{0.0, 0.0}};
    }
    const double det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    if (!(det > 0.0) || !std::isfinite(det))
        return std::nullopt;
    return std::array<Vec, 2>{Vec{h[1][1] / det, -h[0][1] / det}, Vec{-h[1][0] / det, h[0][0] / det}};
}

// Profile chi^2 along component k (log space), minimizing the others.
class Profiler
{
  public:
    Profiler(const FidelityCurve& curve, const Model& model, std::size_t k, const Minimum& best,
             const FitOptions& options)
        : problem_{curve, model, {true, true}}, k_(k), best_(best), options_(options)
    {
        problem_.mask[k] = false;
    }

    double at(double value, Vec& warm) const
    {
        Vec theta = warm;
        theta[k_] = value;
        if (problem_.model.dim() == 1)
            return problem_.cost(theta);
        FitOptions inner = options_;
        inner.max_iterations = 200;
        const auto m = levenberg_marquardt(problem_, theta, inner);
        warm = m.theta;
        return m.chi2;
    }

    // Boundary where the profile rises by delta; nullopt if not bracketed.
    std::optional<double> boundary(double direction, double initial_step, double delta) const
    {
        const double target = best_.chi2 + delta;
        const double origin = best_.theta[k_];
        Vec warm = best_.theta;
        double inside = origin;
        double step = std::max(initial_step, 1e-8);
        double outside = origin;
        bool bracketed = false;
        for (int i = 0; i < 80; ++i)
        {
            outside = origin + direction * step;
            Vec w = warm;
            const double c = at(outside, w);
            if (!std::isfinite(c))
                return std::nullopt;
            if (c >= target)
            {
                bracketed = true;
                break;
            }
            inside = outside;
            warm = w;
            step *= 2.0;
            if (std::abs(step) > 60.0)
                break;
        }
        if (!bracketed)
            return std::nullopt;
        for (int i = 0; i < 100 && std::abs(outside - inside) > 1e-12 * (1.0 + std::abs(inside)); ++i)
        {
            const double mid = 0.5 * (inside + outside);
            Vec w = warm;
            const double c = at(mid, w);
            if (c >= target)
                outside = mid;
            else
            {
                inside = mid;
                warm = w;
            }
        }
        return 0.5 * (inside + outside);
    }

  private:
    Problem problem_;
    std::size_t k_;
    const Minimum& best_;
    const FitOptions& options_;
};

void fill_intervals(ModelFit& fit, const FidelityCurve& curve, const Model& model, const Minimum& best,
                    const FitOptions& options)
{
    const Problem problem{curve, model};
    const auto cov = covariance(problem, best.theta);
    const std::size_t dim = model.dim();

    std::array<Interval, 2> log_intervals{};
    bool profiled = options.profile_intervals;
    for (std::size_t k = 0; k < dim && profiled; ++k)
    {
        const double sigma = cov ? std::sqrt(std::max((*cov)[k][k], 0.0)) : 0.0;
        const double guess = sigma > 0.0 && std::isfinite(sigma) ? kZ90 * sigma : 1e-3;
        Profiler profiler(curve, model, k, best, options);
        const auto hi = profiler.boundary(+1.0, guess, kDeltaChi2For90);
        const auto lo = profiler.boundary(-1.0, guess, kDeltaChi2For90);
        if (!hi || !lo)
        {
            profiled = false;
            break;
        }
        log_intervals[k] = {*lo, *hi};
    }
    if (!profiled)
    {
        for (std::size_t k = 0; k < dim; ++k)
        {
            const double sigma = cov ? std::sqrt(std::max((*cov)[k][k], 0.0)) : 0.0;
            log_intervals[k] = {best.theta[k] - kZ90 * sigma, best.theta[k] + kZ90 * sigma};
        }
    }
    fit.ci_method = profiled ? CiMethod::Profile : CiMethod::Linearized;

    auto to_natural = [&](const Interval& iv, double value) {
        if (profiled)
            return Interval{std::exp(iv.lower), std::exp(iv.upper)};
        // Linearized: symmetric in the natural parameter.
        const double half = value * (iv.upper - iv.lower) / 2.0;
        return Interval{value - half, value + half};
    };

    if (model.dim() == 2)
    {
        fit.n_eff_interval = to_natural(log_intervals[0], fit.params.n_eff);
        fit.lambda_interval = to_natural(log_intervals[1], fit.params.lambda);
        fit.n_eff_ci90 = (fit.n_eff_interval.upper - fit.n_eff_interval.lower) / 2.0;
    }
    else
    {
        fit.lambda_interval = to_natural(log_intervals[0], fit.params.lambda);
        fit.n_eff_interval = {fit.params.n_eff, fit.params.n_eff};
        fit.n_eff_ci90 = 0.0;
    }
    fit.lambda_ci90 = (fit.lambda_interval.upper - fit.lambda_interval.lower) / 2.0;
}

// Time at which the data first fall below `level`, linearly interpolated.
double crossing_time(const FidelityCurve& curve, double level)
{
    for (std::size_t i = 1; i < curve.size(); ++i)
    {
        if (curve.fidelity[i] < level)
        {
            const double f0 = curve.fidelity[i - 1];
            const double f1 = curve.fidelity[i];
            const double t0 = curve.times[i - 1];
            const double t1 = curve.times[i];
            if (f0 <= f1)
                return t1;
            return t0 + (t1 - t0) * (f0 - level) / (f0 - f1);
        }
    }
    return curve.times.back();
}

double inverse_erf(double y)
{
    // Newton iteration on erf, started from a logistic-style guess.
    y = std::clamp(y, -1.0 + 1e-15, 1.0 - 1e-15);
    double x = 0.0;
    const double w = -std::log((1.0 - y) * (1.0 + y));
    x = std::copysign(std::sqrt(std::max(w - 0.5 * std::log(w), 0.0)), y);
    if (std::abs(y) < 0.5)
        x = y * std::sqrt(std::acos(-1.0)) / 2.0;
    for (int i = 0; i < 60; ++i)
    {
        const double err = std::erf(x) - y;
        const double d = 2.0 / std::sqrt(std::acos(-1.0)) * std::exp(-x * x);
        if (d == 0.0)
            break;
        const double dx = err / d;
        x -= dx;
        if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x)))
            break;
    }
    return x;
}

ModelFit finish_fit(const FidelityCurve& curve, ModelKind kind, const Model& model, const Minimum& best,
                    const FitOptions& options)
{
    ModelFit fit;
    fit.kind = kind;
    fit.params = model.params(best.theta);
    fit.chi2 = best.chi2;
    fit.points = curve.size();
    fit.dof = curve.size() > model.dim() ? curve.size() - model.dim() : 0;
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    fit.t_first = curve.times.front();
    fit.t_last = curve.times.back();
    fill_intervals(fit, curve, model, best, options);
    return fit;
}

}  // namespace

ChiSquared chi_squared(const FidelityCurve& curve, const std::function<double(double)>& model,
                       std::size_t free_parameters)
{
    check_sigmas(curve);
    ChiSquared out;
    for (std::size_t i = 0; i < curve.size(); ++i)
    {
        const double r = (curve.fidelity[i] - model(curve.times[i])) / curve.sigma[i];
        out.chi2 += r * r;
    }
    out.dof = curve.size() > free_parameters ? curve.size() - free_parameters : 0;
    return out;
}

bool has_resolved_decay(const FidelityCurve& curve)
{
    if (curve.size() < 3)
        return false;
    const double floor = *std::min_element(curve.fidelity.begin(), curve.fidelity.end());
    std::size_t inside = 0;
    for (std::size_t i = 0; i < curve.size(); ++i)
    {
        const double f = curve.fidelity[i];
        const double s = curve.sigma[i];
        if (f < 1.0 - 2.0 * s && f > floor + 2.0 * s)
            ++inside;
    }
    return inside >= 3;
}

ModelFit fit_gaussian_model(const FidelityCurve& curve, std::uint32_t lattice_size, const FitOptions& options)
{
    check_sigmas(curve);
    if (lattice_size < 1)
        throw std::invalid_argument("lattice size must be positive");
    if (!has_resolved_decay(curve))
        throw NoDecayError("no decay resolved in the fidelity curve");

    const Model model(ModelKind::GaussianTwoParam, 0.0);
    const Problem problem{curve, model};

    const double floor = *std::min_element(curve.fidelity.begin(), curve.fidelity.end());
    const double level = std::max(0.9, 0.5 * (1.0 + floor));
    const double t_level = std::max(crossing_time(curve, level), 1e-12);
    const double z_level = inverse_erf(2.0 * level - 1.0);

    const double n = static_cast<double>(lattice_size);
    std::optional<Minimum> best;
    for (double n0 : {1.0, n / 10.0, n / 2.0, n})
    {
        n0 = std::max(n0, 1e-3);
        // Solve sqrt(n0/2) u / sqrt(1 - u^2) = z_level for u, then lambda0.
        const double w = z_level / std::sqrt(0.5 * n0);
        const double u = w > 0.0 ? w / std::sqrt(1.0 + w * w) : 0.5;
        const double lambda0 = std::max(-std::log(u) / (2.0 * t_level), 1e-12);
        const auto m = levenberg_marquardt(problem, {std::log(n0), std::log(lambda0)}, options);
        if (!best || m.chi2 < best->chi2)
            best = m;
    }
    return finish_fit(curve, ModelKind::GaussianTwoParam, model, *best, options);
}

ModelFit fit_exponential_model(const FidelityCurve& curve, const FitOptions& options)
{
    check_sigmas(curve);
    if (!has_resolved_decay(curve))
        throw NoDecayError("no decay resolved in the fidelity curve");

    const Model model(ModelKind::ExponentialOneParam, 0.0);
    const Problem problem{curve, model};
    const double floor = *std::min_element(curve.fidelity.begin(), curve.fidelity.end());
    const double level = std::max(0.9, 0.5 * (1.0 + floor));
    const double t_level = std::max(crossing_time(curve, level), 1e-12);
    // (1 + e^{-2 lambda t}) / 2 = level
    const double lambda0 = std::max(-std::log(2.0 * level - 1.0) / (2.0 * t_level), 1e-12);

    std::optional<Minimum> best;
    for (double scale : {0.1, 1.0, 10.0})
    {
        const auto m = levenberg_marquardt(problem, {std::log(lambda0 * scale), 0.0}, options);
        if (!best || m.chi2 < best->chi2)
            best = m;
    }
    return finish_fit(curve, ModelKind::ExponentialOneParam, model, *best, options);
}

namespace {

void check_line_input(std::span<const double> xs, std::span<const double> ys, std::span<const double> errs,
                      std::size_t min_points)
{
    if (xs.size() != ys.size() || xs.size() != errs.size())
        throw std::invalid_argument("input arrays differ in length");
    if (xs.size() < min_points)
        throw std::invalid_argument("too few points for a line fit");
    for (double e : errs)
    {
        if (!(e > 0.0) || !std::isfinite(e))
            throw std::invalid_argument("errors must be positive");
    }
}

double birge_factor(double chi2, std::size_t dof)
{
    if (dof == 0)
        return 1.0;
    return std::max(1.0, std::sqrt(chi2 / static_cast<double>(dof)));
}

}  // namespace

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys, std::span<const double> y_errors)
{
    check_line_input(xs, ys, y_errors, 2);
    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double w = 1.0 / (y_errors[i] * y_errors[i]);
        s += w;
        sx += w * xs[i];
        sy += w * ys[i];
    }
    // Centered sums for stability.
    const double xbar = sx / s;
    const double ybar = sy / s;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double w = 1.0 / (y_errors[i] * y_errors[i]);
        const double dx = xs[i] - xbar;
        sxx += w * dx * dx;
        sxy += w * dx * (ys[i] - ybar);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("x values are all equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.slope_sigma = std::sqrt(1.0 / sxx);
    fit.intercept_sigma = std::sqrt(1.0 / s + xbar * xbar / sxx);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double r = (ys[i] - fit.intercept - fit.slope * xs[i]) / y_errors[i];
        fit.chi2 += r * r;
    }
    fit.dof = xs.size() - 2;
    const double inflate = birge_factor(fit.chi2, fit.dof);
    fit.slope_ci90 = kZ90 * fit.slope_sigma * inflate;
    fit.intercept_ci90 = kZ90 * fit.intercept_sigma * inflate;
    return fit;
}

LinearFit fit_proportional(std::span<const double> xs, std::span<const double> ys,
                           std::span<const double> y_errors)
{
    check_line_input(xs, ys, y_errors, 1);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double w = 1.0 / (y_errors[i] * y_errors[i]);
        sxx += w * xs[i] * xs[i];
        sxy += w * xs[i] * ys[i];
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("x values are all zero");
    LinearFit fit;
    fit.through_origin = true;
    fit.slope = sxy / sxx;
    fit.slope_sigma = std::sqrt(1.0 / sxx);
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        const double r = (ys[i] - fit.slope * xs[i]) / y_errors[i];
        fit.chi2 += r * r;
    }
    fit.dof = xs.size() - 1;
    fit.slope_ci90 = kZ90 * fit.slope_sigma * birge_factor(fit.chi2, fit.dof);
    return fit;
}

ScalingClassification classify_lambda_scaling(std::span<const double> sizes, std::span<const double> lambdas,
                                              std::span<const double> lambda_errors, double threshold)
{
    if (sizes.size() != lambdas.size() || sizes.size() != lambda_errors.size())
        throw std::invalid_argument("input arrays differ in length");
    if (sizes.size() < 4)
        throw std::invalid_argument("scaling classification needs at least four points");
    std::vector<double> log_n, log_l, log_err;
    for (std::size_t i = 0; i < sizes.size(); ++i)
    {
        if (!(lambdas[i] > 0.0))
            throw std::invalid_argument("lambda values must be positive");
        if (!(sizes[i] > 0.0))
            throw std::invalid_argument("sizes must be positive");
        log_n.push_back(std::log(sizes[i]));
        log_l.push_back(std::log(lambdas[i]));
        log_err.push_back(lambda_errors[i] / lambdas[i]);
    }
    ScalingClassification out;
    out.exponential = fit_linear(sizes, log_l, log_err);
    out.power_law = fit_linear(log_n, log_l, log_err);
    out.delta_chi2 = out.power_law.chi2 - out.exponential.chi2;
    if (std::abs(out.delta_chi2) < threshold)
        out.verdict = LambdaScaling::Inconclusive;
    else
        out.verdict = out.delta_chi2 > 0.0 ? LambdaScaling::Exponential : LambdaScaling::Subexponential;
    return out;
}

}  // namespace isingmem
