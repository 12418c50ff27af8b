#include "irrsde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irrsde/brownian.hpp"
#include "irrsde/log.hpp"
#include "irrsde/schemes.hpp"

namespace irrsde {

namespace {

constexpr unsigned kSubGridLevels = 3;  // 8x sub-grid for in-interval sups

void require_paths(const McOptions& opts) {
    if (opts.n_paths == 0) throw std::invalid_argument("n_paths must be at least 1");
}

PathKey key_for(const McOptions& opts, std::size_t i) { return {opts.master_seed, static_cast<std::uint64_t>(i)}; }

Estimate mean_estimate(const PathTable& t, std::size_t column, std::size_t chunk) {
    const double n = static_cast<double>(t.n_paths);
    const double mean = column_sum(t, column, chunk) / n;
    if (t.n_paths < 2) return {mean, 0.0};
    const double m2 = column_sum(t, column, chunk, [](double v) { return v * v; }) / n;
    const double var = std::max(0.0, m2 - mean * mean) * n / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

// sqrt(E[D^2]) from per-path D, delta-method standard error.
Estimate l2_estimate(const PathTable& t, std::size_t column, std::size_t chunk) {
    const double n = static_cast<double>(t.n_paths);
    const double m2 = column_sum(t, column, chunk, [](double v) { return v * v; }) / n;
    const double value = std::sqrt(m2);
    if (t.n_paths < 2 || m2 == 0.0) return {value, 0.0};
    const double m4 = column_sum(t, column, chunk, [](double v) { return v * v * v * v; }) / n;
    const double var = std::max(0.0, m4 - m2 * m2) * n / (n - 1.0);
    return {value, std::sqrt(var) / (2.0 * value * std::sqrt(n))};
}

double max_abs_difference(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

bool ErrorTable::any_overflow() const noexcept {
    return std::any_of(rows.begin(), rows.end(), [](const ErrorRow& r) { return r.n_overflowed > 0; });
}

double level_step_size(const SdeProblem& problem, unsigned level, std::size_t base_steps) {
    return problem.horizon() / static_cast<double>(base_steps << level);
}

StrongError strong_error(const SdeProblem& problem, unsigned coarse_level, unsigned ref_level, const McOptions& opts) {
    require_paths(opts);
    if (coarse_level != ref_level && ref_level < coarse_level + 3) {
        throw std::invalid_argument("reference level must be at least 3 levels finer than the coarse level");
    }
    const auto table = run_paths(2, opts, [&](std::size_t i, std::span<double> row) {
        const auto fine = generate_increments(key_for(opts, i), ref_level, opts.base_steps, problem.horizon());
        const auto reference = simulate_tamed_em(problem, fine);
        const auto coarse = simulate_tamed_em(problem, coarsen(fine, std::size_t{1} << (ref_level - coarse_level)));
        const auto interpolated = evaluate_on_fine_grid(coarse, problem, fine);
        row[0] = max_abs_difference(reference.values, interpolated);
        row[1] = (reference.overflowed || coarse.overflowed) ? 1.0 : 0.0;
    });
    const auto e = l2_estimate(table, 0, opts.chunk_size);
    return {e.value, e.std_error, static_cast<std::size_t>(column_sum(table, 1, opts.chunk_size))};
}

ErrorTable convergence_study(const SdeProblem& problem, std::span<const unsigned> levels, unsigned ref_level,
                             const McOptions& opts) {
    require_paths(opts);
    if (levels.size() < 3) throw std::invalid_argument("convergence study needs at least 3 levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i > 0 && levels[i] <= levels[i - 1]) throw std::invalid_argument("levels must be strictly increasing");
        if (levels[i] + 3 > ref_level) {
            throw std::invalid_argument("level " + std::to_string(levels[i]) +
                                        " is not at least 3 levels below the reference level");
        }
    }
    const std::size_t n_levels = levels.size();
    const auto table = run_paths(2 * n_levels, opts, [&](std::size_t i, std::span<double> row) {
        const auto fine = generate_increments(key_for(opts, i), ref_level, opts.base_steps, problem.horizon());
        const auto hierarchy = coarsening_hierarchy(fine, levels.front());
        const auto reference = simulate_tamed_em(problem, fine);
        for (std::size_t l = 0; l < n_levels; ++l) {
            const auto coarse = simulate_tamed_em(problem, hierarchy[ref_level - levels[l]]);
            const auto interpolated = evaluate_on_fine_grid(coarse, problem, fine);
            row[2 * l] = max_abs_difference(reference.values, interpolated);
            row[2 * l + 1] = (reference.overflowed || coarse.overflowed) ? 1.0 : 0.0;
        }
    });

    ErrorTable out;
    out.ref_level = ref_level;
    for (std::size_t l = 0; l < n_levels; ++l) {
        const auto e = l2_estimate(table, 2 * l, opts.chunk_size);
        out.rows.push_back({levels[l], level_step_size(problem, levels[l], opts.base_steps), e.value, e.std_error,
                            opts.n_paths, static_cast<std::size_t>(column_sum(table, 2 * l + 1, opts.chunk_size))});
    }
    out.fit = fit_order(out.rows);
    return out;
}

OrderFit fit_order(std::span<const ErrorRow> rows) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& r : rows) {
        if (!(r.error_l2sup > 0.0) || !(r.delta > 0.0)) {
            warn("dropping row with delta " + std::to_string(r.delta) + " and non-positive error from the fit");
            continue;
        }
        xs.push_back(std::log2(r.delta));
        ys.push_back(std::log2(r.error_l2sup));
    }
    if (xs.size() < 3) throw std::invalid_argument("order fit needs at least 3 rows with positive error");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("order fit needs distinct step sizes");
    OrderFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.rows_used = xs.size();
    return fit;
}

TransformDomainError transform_domain_error(const SdeProblem& problem, const TransformG& g, unsigned coarse_level,
                                            unsigned ref_level, const McOptions& opts) {
    require_paths(opts);
    if (coarse_level != ref_level && ref_level < coarse_level + 3) {
        throw std::invalid_argument("reference level must be at least 3 levels finer than the coarse level");
    }
    const TransformedCoefficients tc(problem, g);
    const double z0 = g(problem.x0());
    const auto table = run_paths(2, opts, [&](std::size_t i, std::span<double> row) {
        const auto fine = generate_increments(key_for(opts, i), ref_level, opts.base_steps, problem.horizon());
        const auto coarse_incr = coarsen(fine, std::size_t{1} << (ref_level - coarse_level));
        const auto z_ref = simulate_transformed_tamed_em(tc, z0, fine);
        const auto z_coarse = simulate_transformed_tamed_em(tc, z0, coarse_incr);
        const auto x_coarse = simulate_tamed_em(problem, coarse_incr);
        row[0] = max_abs_difference(z_ref.values, evaluate_transformed_on_fine_grid(z_coarse, tc, fine));
        double d = 0.0;
        for (std::size_t j = 0; j < z_coarse.values.size(); ++j) {
            d = std::max(d, std::abs(z_coarse.values[j] - g(x_coarse.values[j])));
        }
        row[1] = d;
    });
    return {l2_estimate(table, 0, opts.chunk_size), l2_estimate(table, 1, opts.chunk_size)};
}

MomentEstimate moment_sup(const SdeProblem& problem, unsigned level, double p, const McOptions& opts, Scheme scheme) {
    require_paths(opts);
    if (!(p >= 2.0)) throw std::invalid_argument("moment order p must be >= 2");
    const auto table = run_paths(2, opts, [&](std::size_t i, std::span<double> row) {
        const auto incr = generate_increments(key_for(opts, i), level, opts.base_steps, problem.horizon());
        const auto sol = scheme == Scheme::tamed ? simulate_tamed_em(problem, incr) : simulate_untamed_em(problem, incr);
        double m = 0.0;
        for (double v : sol.values) m = std::max(m, std::abs(v));
        row[0] = std::pow(m, p);
        row[1] = sol.overflowed ? 1.0 : 0.0;
    });
    const auto e = mean_estimate(table, 0, opts.chunk_size);
    return {e.value, e.std_error, column_sum(table, 1, opts.chunk_size) / static_cast<double>(opts.n_paths)};
}

double increment_moment(const SdeProblem& problem, unsigned level, double p, const McOptions& opts) {
    require_paths(opts);
    if (!(p >= 2.0)) throw std::invalid_argument("moment order p must be >= 2");
    const std::size_t n = opts.base_steps << level;
    constexpr std::size_t sub = std::size_t{1} << kSubGridLevels;
    const auto table = run_paths(n, opts, [&](std::size_t i, std::span<double> row) {
        const auto fine =
            generate_increments(key_for(opts, i), level + kSubGridLevels, opts.base_steps, problem.horizon());
        const auto sol = simulate_tamed_em(problem, coarsen(fine, sub));
        const auto cont = evaluate_on_fine_grid(sol, problem, fine);
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0;
            for (std::size_t r = 1; r <= sub; ++r) s = std::max(s, std::abs(cont[k * sub + r] - sol.values[k]));
            row[k] = std::pow(s, p);
        }
    });
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double m = column_sum(table, k, opts.chunk_size) / static_cast<double>(opts.n_paths);
        worst = std::max(worst, std::pow(m, 1.0 / p));
    }
    return worst;
}

Estimate occupation_time(const SdeProblem& problem, unsigned level, std::size_t k, double eps,
                         const McOptions& opts) {
    require_paths(opts);
    if (k >= problem.num_breakpoints()) throw std::out_of_range("breakpoint index out of range");
    if (!(eps > 0.0)) throw std::invalid_argument("occupation radius must be positive");
    const double zeta = problem.breakpoints()[k];
    const auto table = run_paths(1, opts, [&](std::size_t i, std::span<double> row) {
        const auto incr = generate_increments(key_for(opts, i), level, opts.base_steps, problem.horizon());
        const auto sol = simulate_tamed_em(problem, incr);
        std::size_t hits = 0;
        for (std::size_t j = 0; j + 1 < sol.values.size(); ++j) {
            if (std::abs(sol.values[j] - zeta) <= eps) ++hits;
        }
        row[0] = sol.delta * static_cast<double>(hits);
    });
    return mean_estimate(table, 0, opts.chunk_size);
}

Estimate crossing_statistic(const SdeProblem& problem, unsigned level, const McOptions& opts) {
    require_paths(opts);
    if (problem.num_breakpoints() == 0) throw std::invalid_argument("crossing statistic needs at least one breakpoint");
    const auto bps = problem.breakpoints();
    constexpr std::size_t sub = std::size_t{1} << kSubGridLevels;
    const auto table = run_paths(1, opts, [&](std::size_t i, std::span<double> row) {
        const auto fine =
            generate_increments(key_for(opts, i), level + kSubGridLevels, opts.base_steps, problem.horizon());
        const auto sol = simulate_tamed_em(problem, coarsen(fine, sub));
        const auto cont = evaluate_on_fine_grid(sol, problem, fine);
        std::size_t straddles = 0;
        for (std::size_t k = 0; k < sol.steps(); ++k) {
            const double x = sol.values[k];
            for (std::size_t r = 1; r <= sub; ++r) {
                const double y = cont[k * sub + r];
                const bool any = std::any_of(bps.begin(), bps.end(), [&](double z) { return (x - z) * (y - z) <= 0.0; });
                if (any) ++straddles;
            }
        }
        row[0] = fine.step_size() * static_cast<double>(straddles);
    });
    return l2_estimate(table, 0, opts.chunk_size);
}

DiagnosticsReport run_diagnostics(const SdeProblem& problem, std::span<const unsigned> levels,
                                  const DiagnosticsConfig& config, const McOptions& opts) {
    if (config.crossing && problem.num_breakpoints() == 0) {
        throw std::invalid_argument("crossing statistic requested but the drift has no breakpoints");
    }
    DiagnosticsReport report;
    report.n_paths = opts.n_paths;
    for (unsigned level : levels) {
        LevelDiagnostics d;
        d.level = level;
        d.delta = level_step_size(problem, level, opts.base_steps);
        for (double p : config.moment_p) d.moment_sup[p] = moment_sup(problem, level, p, opts);
        for (double p : config.increment_p) d.increment_moment[p] = increment_moment(problem, level, p, opts);
        for (std::size_t k = 0; k < problem.num_breakpoints(); ++k) {
            for (double eps : config.occupation_eps) {
                d.occupation.push_back({k, eps, occupation_time(problem, level, k, eps, opts)});
            }
        }
        if (config.crossing) d.crossing = crossing_statistic(problem, level, opts);
        report.levels.push_back(std::move(d));
    }
    return report;
}

}  // namespace irrsde
