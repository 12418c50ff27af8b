#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "irrsde/model.hpp"

namespace irrsde {

/**
 * Monotone change of variables that removes the drift discontinuities.
 *
 *   G(x) = x + sum_k alpha_k (x - zeta_k) |x - zeta_k| phi((x - zeta_k) / nu),
 *   phi(u) = (1 - u^2)^3 on |u| <= 1, zero outside.
 *
 * With alpha_k = (mu(zeta_k-) - mu(zeta_k+)) / (2 sigma(zeta_k)^2) the jump of
 * G'' at zeta_k cancels the jump of mu in G' mu + G'' sigma^2 / 2. G' = 1 at
 * every zeta_k and outside the bumps |x - zeta_k| < nu.
 */
class TransformG {
public:
    /// Identity transform.
    TransformG() = default;

    /// Raw parameters. Only requires nu > 0 and disjoint bump supports; the
    /// bi-Lipschitz bound is not enforced (see satisfies_derivative_bounds()).
    TransformG(std::vector<double> breakpoints, std::vector<double> alphas, double nu);

    /// Throws std::invalid_argument when sigma vanishes at a breakpoint.
    static TransformG build(const SdeProblem& problem);

    double operator()(double x) const noexcept { return value(x); }
    double value(double x) const noexcept;
    double first_derivative(double x) const noexcept;
    /// At a breakpoint returns the right-hand limit.
    double second_derivative(double x) const noexcept;
    /// Solves G(x) = y by safeguarded Newton inside a bisection bracket.
    double inverse(double y) const noexcept;

    bool is_identity() const noexcept { return breakpoints_.empty(); }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> alphas() const noexcept { return alphas_; }
    double nu() const noexcept { return nu_; }
    /// Radius outside of which G is the identity: max_k |zeta_k| + nu.
    double identity_radius() const noexcept;
    /// nu * |alpha_k| * 5 < 1/2 for every k, which keeps G' in [1/2, 3/2].
    bool satisfies_derivative_bounds() const noexcept;
    /// Upper bound on |G(x) - x|.
    double max_displacement() const noexcept;

private:
    std::vector<double> breakpoints_;
    std::vector<double> alphas_;
    double nu_ = 1.0;
};

/// Coefficients of the SDE for Z = G(X):
///   mu~ = (G' mu + G'' sigma^2 / 2) o G^{-1},   sigma~ = (G' sigma) o G^{-1}.
class TransformedCoefficients {
public:
    TransformedCoefficients(SdeProblem problem, TransformG g) : problem_(std::move(problem)), g_(std::move(g)) {}

    double drift(double z) const noexcept;
    double diffusion(double z) const noexcept;

    const SdeProblem& problem() const noexcept { return problem_; }
    const TransformG& transform() const noexcept { return g_; }

private:
    SdeProblem problem_;
    TransformG g_;
};

struct CheckResult {
    bool pass;
    double value;
    double tol;
};

struct SelfCheckReport {
    std::map<std::string, CheckResult> checks;
    bool all_pass() const noexcept;
};

/// Difference of the one-sided limits of mu~ at G(zeta_k), extrapolated to
/// h -> 0 from h in {1e-3, 1e-4, 1e-5}.
double transformed_drift_jump(const TransformedCoefficients& tc, std::size_t k);

SelfCheckReport transform_selfcheck(const SdeProblem& problem, const TransformG& g);

}  // namespace irrsde
