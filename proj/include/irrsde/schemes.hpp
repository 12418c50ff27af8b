#pragma once

#include <cstddef>
#include <vector>

#include "irrsde/brownian.hpp"
#include "irrsde/model.hpp"
#include "irrsde/transform.hpp"

namespace irrsde {

/// Magnitude at which the explicit schemes stop and freeze the path.
inline constexpr double kOverflowThreshold = 1e150;

/// Scheme values X_{t_0}, ..., X_{t_N} on an equidistant grid.
struct GridSolution {
    double delta = 0.0;
    std::vector<double> values;
    bool overflowed = false;

    std::size_t steps() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// mu / (1 + delta |mu|). Throws std::invalid_argument unless 0 < delta < 1.
double tame_drift(double mu_val, double delta);

/// x + tame_drift(mu(x), delta) delta + sigma(x) dW.
double tamed_em_step(const SdeProblem& problem, double x, double delta, double dW);

/// Tamed Euler-Maruyama on the grid of the increments, started at x0.
GridSolution simulate_tamed_em(const SdeProblem& problem, const IncrementArray& increments);

/// Plain explicit Euler-Maruyama. Paths exceeding kOverflowThreshold are
/// clamped and frozen, and `overflowed` is set.
GridSolution simulate_untamed_em(const SdeProblem& problem, const IncrementArray& increments);

/// Tamed scheme for Z = G(X) with the transformed coefficients, started at z0.
GridSolution simulate_transformed_tamed_em(const TransformedCoefficients& tc, double z0,
                                           const IncrementArray& increments);

/**
 * Time-continuous tamed scheme at the times of a finer nested grid:
 *
 *   X_t = X_{t_k} + tame(mu(X_{t_k})) (t - t_k) + sigma(X_{t_k}) (W_t - W_{t_k}),
 *
 * where t_k is the coarse grid point at or below t and W_t - W_{t_k} is summed
 * from the fine increments. Values at coarse grid times are copied unchanged.
 * Throws std::invalid_argument if the fine grid does not refine the coarse
 * one by a power of two.
 */
std::vector<double> evaluate_on_fine_grid(const GridSolution& coarse, const SdeProblem& problem,
                                          const IncrementArray& fine_increments);

std::vector<double> evaluate_transformed_on_fine_grid(const GridSolution& coarse, const TransformedCoefficients& tc,
                                                      const IncrementArray& fine_increments);

}  // namespace irrsde
