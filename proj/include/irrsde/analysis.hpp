#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "irrsde/model.hpp"
#include "irrsde/parallel.hpp"
#include "irrsde/transform.hpp"

namespace irrsde {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct StrongError {
    double error_l2sup = 0.0;
    double std_error = 0.0;
    std::size_t n_overflowed = 0;
};

struct ErrorRow {
    unsigned level = 0;
    double delta = 0.0;
    double error_l2sup = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::size_t n_overflowed = 0;
};

struct OrderFit {
    double slope = 0.0;
    double intercept = 0.0;  ///< log2 of the error constant
    double r_squared = 0.0;
    std::size_t rows_used = 0;
};

/// Strong sup-norm errors per step size, ordered by decreasing delta.
struct ErrorTable {
    std::vector<ErrorRow> rows;
    unsigned ref_level = 0;
    OrderFit fit;

    bool any_overflow() const noexcept;
};

/// Step size delta = T / (base_steps * 2^level).
double level_step_size(const SdeProblem& problem, unsigned level, std::size_t base_steps);

/**
 * (E[max_t |X_ref(t) - X_coarse(t)|^2])^{1/2}, where both schemes are driven
 * by the same Brownian path: X_ref is the tamed scheme at ref_level and
 * X_coarse is the time-continuous tamed scheme at coarse_level evaluated on the
 * reference grid. Requires coarse_level == ref_level or
 * ref_level >= coarse_level + 3. Standard error by the delta method.
 */
StrongError strong_error(const SdeProblem& problem, unsigned coarse_level, unsigned ref_level, const McOptions& opts);

/// strong_error for every level on common paths, plus a log2-log2 fit.
/// Requires >= 3 strictly increasing levels, each <= ref_level - 3.
ErrorTable convergence_study(const SdeProblem& problem, std::span<const unsigned> levels, unsigned ref_level,
                             const McOptions& opts);

/// Least squares of log2(error) against log2(delta). Rows with non-positive
/// error are dropped with a warning; throws std::invalid_argument if fewer
/// than three remain.
OrderFit fit_order(std::span<const ErrorRow> rows);

struct TransformDomainError {
    Estimate z_error;         ///< L2-sup distance of Z^(delta) to the fine transformed scheme
    Estimate gx_discrepancy;  ///< L2-sup of Z^(delta) - G(X^(delta)) on the coarse grid
};

TransformDomainError transform_domain_error(const SdeProblem& problem, const TransformG& g, unsigned coarse_level,
                                            unsigned ref_level, const McOptions& opts);

enum class Scheme { tamed, untamed };

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double overflow_fraction = 0.0;
};

/// Monte Carlo mean of (max_k |X_{t_k}|)^p. Requires p >= 2.
MomentEstimate moment_sup(const SdeProblem& problem, unsigned level, double p, const McOptions& opts,
                          Scheme scheme = Scheme::tamed);

/// max over grid intervals [t_k, t_k + delta] of (E[sup_s |X_s - X_{t_k}|^p])^{1/p},
/// the sup taken over an 8x finer sub-grid of the time-continuous scheme.
double increment_moment(const SdeProblem& problem, unsigned level, double p, const McOptions& opts);

/// E[delta * sum_{j<N} 1{|X_{t_j} - zeta_k| <= eps}], k zero-based.
Estimate occupation_time(const SdeProblem& problem, unsigned level, std::size_t k, double eps,
                         const McOptions& opts);

/**
 * L2 norm of the time during which X_s and X_{floor(s)} lie on different
 * sides of (or on) some breakpoint. X_s is the time-continuous scheme on an
 * 8x finer sub-grid; the time integral is a right-endpoint Riemann sum.
 * Throws std::invalid_argument when the drift has no breakpoints.
 */
Estimate crossing_statistic(const SdeProblem& problem, unsigned level, const McOptions& opts);

struct DiagnosticsConfig {
    std::vector<double> moment_p{2.0, 4.0};
    std::vector<double> increment_p{2.0};
    std::vector<double> occupation_eps{0.1};
    bool crossing = true;
};

struct OccupationEntry {
    std::size_t k = 0;
    double eps = 0.0;
    Estimate estimate;
};

struct LevelDiagnostics {
    unsigned level = 0;
    double delta = 0.0;
    std::map<double, MomentEstimate> moment_sup;
    std::map<double, double> increment_moment;
    std::vector<OccupationEntry> occupation;
    std::optional<Estimate> crossing;
};

struct DiagnosticsReport {
    std::size_t n_paths = 0;
    std::vector<LevelDiagnostics> levels;
};

/// Throws std::invalid_argument if crossing is requested for a drift without breakpoints.
DiagnosticsReport run_diagnostics(const SdeProblem& problem, std::span<const unsigned> levels,
                                  const DiagnosticsConfig& config, const McOptions& opts);

}  // namespace irrsde
