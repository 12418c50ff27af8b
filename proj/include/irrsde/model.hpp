#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "irrsde/polynomial.hpp"

namespace irrsde {

/**
 * Scalar time-homogeneous SDE  dX = mu(X) dt + sigma(X) dW,  X_0 = x0,  t in [0, T].
 *
 * The drift may jump at its breakpoints zeta_1 < ... < zeta_m. The diffusion
 * is a single global polynomial. Immutable once constructed.
 */
class SdeProblem {
public:
    /// Throws std::invalid_argument if horizon <= 0, x0 is not finite,
    /// or the diffusion has breakpoints.
    SdeProblem(PiecewisePolynomial drift, PiecewisePolynomial diffusion, double x0, double horizon);

    /// Throws std::domain_error for non-finite x.
    double drift(double x) const;
    double diffusion(double x) const;

    /// mu(zeta_k-) - mu(zeta_k+), k zero-based. Throws std::out_of_range.
    double drift_jump(std::size_t k) const;

    const PiecewisePolynomial& drift_coefficient() const noexcept { return drift_; }
    const PiecewisePolynomial& diffusion_coefficient() const noexcept { return diffusion_; }
    std::span<const double> breakpoints() const noexcept { return drift_.breakpoints(); }
    std::size_t num_breakpoints() const noexcept { return drift_.num_breakpoints(); }

    double x0() const noexcept { return x0_; }
    double horizon() const noexcept { return horizon_; }

    /// Polynomial growth exponent of mu': max(1, deg(mu) - 1).
    double growth_exponent() const noexcept { return growth_exponent_; }

    /// Unchecked evaluation for the simulation hot loops.
    double drift_unchecked(double x) const noexcept { return drift_(x); }
    double diffusion_unchecked(double x) const noexcept { return diffusion_(x); }

private:
    PiecewisePolynomial drift_;
    PiecewisePolynomial diffusion_;
    double x0_;
    double horizon_;
    double growth_exponent_;
};

double compute_growth_exponent(const PiecewisePolynomial& drift);

enum class ClauseStatus { pass, fail, unverified };

std::string to_string(ClauseStatus s);

struct ClauseResult {
    std::string name;
    ClauseStatus status;
    double value;  ///< clause-specific diagnostic (bound or minimum)
    std::string detail;
};

struct ValidationReport {
    std::vector<ClauseResult> clauses;
    /// Upper bound on the linear-growth constant of mu over [zeta_1, zeta_m].
    double linear_growth_bound = 0.0;

    bool ok() const noexcept;
    const ClauseResult& clause(const std::string& name) const;
};

struct ValidationOptions {
    /// Half-width of the range on which derivative bounds of sigma are reported.
    double diffusion_check_range = 10.0;
    std::size_t grid_points = 10000;
    double sigma_zero_tolerance = 1e-12;
};

/**
 * Checks the structural conditions the convergence result relies on:
 *  (a) sigma(zeta_k) != 0,
 *  (b) piecewise Lipschitz drift on [zeta_1, zeta_m] (value: max |mu'| there),
 *  (c) one-sided Lipschitz drift on the two outer intervals,
 *  (d) sigma Lipschitz with Lipschitz derivative.
 */
ValidationReport validate_assumption1(const SdeProblem& problem, const ValidationOptions& opts = {});

}  // namespace irrsde
