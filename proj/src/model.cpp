#include "irrsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irrsde {

double compute_growth_exponent(const PiecewisePolynomial& drift) {
    const auto deg = drift.max_degree();
    return deg >= 2 ? std::max(1.0, static_cast<double>(deg) - 1.0) : 1.0;
}

SdeProblem::SdeProblem(PiecewisePolynomial drift, PiecewisePolynomial diffusion, double x0, double horizon)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), x0_(x0), horizon_(horizon) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw std::invalid_argument("horizon T must be positive");
    if (!std::isfinite(x0_)) throw std::invalid_argument("initial value must be finite");
    if (diffusion_.num_breakpoints() != 0) throw std::invalid_argument("diffusion must not have breakpoints");
    growth_exponent_ = compute_growth_exponent(drift_);
}

double SdeProblem::drift(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("drift evaluated at non-finite x");
    return drift_(x);
}

double SdeProblem::diffusion(double x) const {
    if (!std::isfinite(x)) throw std::domain_error("diffusion evaluated at non-finite x");
    return diffusion_(x);
}

double SdeProblem::drift_jump(std::size_t k) const { return drift_.left_limit(k) - drift_.right_limit(k); }

std::string to_string(ClauseStatus s) {
    switch (s) {
        case ClauseStatus::pass: return "pass";
        case ClauseStatus::fail: return "fail";
        case ClauseStatus::unverified: return "unverified";
    }
    return "unknown";
}

bool ValidationReport::ok() const noexcept {
    return std::none_of(clauses.begin(), clauses.end(),
                        [](const ClauseResult& c) { return c.status == ClauseStatus::fail; });
}

const ClauseResult& ValidationReport::clause(const std::string& name) const {
    for (const auto& c : clauses) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("no clause named " + name);
}

namespace {

// Sign of mu' as x -> +inf (toward_right) or -inf. Zero for degree <= 1.
int tail_derivative_sign(const Polynomial& p, bool toward_right) {
    const auto d = p.degree();
    if (d <= 1) return 0;
    int sign = p.leading_coefficient() > 0 ? 1 : -1;
    if (!toward_right && (d - 1) % 2 == 1) sign = -sign;
    return sign;
}

ClauseResult check_sigma_nonzero(const SdeProblem& problem, double tol) {
    double min_abs = std::numeric_limits<double>::infinity();
    for (double z : problem.breakpoints()) min_abs = std::min(min_abs, std::abs(problem.diffusion(z)));
    if (problem.num_breakpoints() == 0) {
        return {"sigma_nonzero_at_breakpoints", ClauseStatus::pass, 0.0, "no breakpoints"};
    }
    const bool ok = min_abs > tol;
    return {"sigma_nonzero_at_breakpoints", ok ? ClauseStatus::pass : ClauseStatus::fail, min_abs,
            ok ? "min |sigma(zeta_k)|" : "sigma vanishes at a breakpoint"};
}

ClauseResult check_piecewise_lipschitz(const SdeProblem& problem, std::size_t grid_points) {
    const auto& mu = problem.drift_coefficient();
    const auto bps = mu.breakpoints();
    if (bps.empty()) return {"piecewise_lipschitz_inner", ClauseStatus::pass, 0.0, "no breakpoints"};
    double bound = 0.0;
    for (std::size_t k = 0; k < bps.size(); ++k) {
        // both one-sided derivatives at every breakpoint
        bound = std::max(bound, std::abs(mu.pieces()[k].derivative()(bps[k])));
        bound = std::max(bound, std::abs(mu.pieces()[k + 1].derivative()(bps[k])));
    }
    const double lo = bps.front();
    const double hi = bps.back();
    for (std::size_t i = 0; i + 1 < grid_points && hi > lo; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        bound = std::max(bound, std::abs(mu.derivative_at(x)));
    }
    return {"piecewise_lipschitz_inner", ClauseStatus::pass, bound, "max |mu'| on [zeta_1, zeta_m]"};
}

ClauseResult check_one_sided_lipschitz(const SdeProblem& problem) {
    const auto pieces = problem.drift_coefficient().pieces();
    const int right = tail_derivative_sign(pieces.back(), true);
    const int left = tail_derivative_sign(pieces.front(), false);
    std::string detail;
    if (right > 0) detail += "mu' -> +inf as x -> +inf; ";
    if (left > 0) detail += "mu' -> +inf as x -> -inf; ";
    const bool ok = right <= 0 && left <= 0;
    if (ok) detail = "outer pieces have derivative bounded above";
    return {"one_sided_lipschitz_outer", ok ? ClauseStatus::pass : ClauseStatus::fail,
            static_cast<double>(std::max(left, right)), detail};
}

ClauseResult check_diffusion_regularity(const SdeProblem& problem, double range, std::size_t grid_points) {
    const auto& sigma = problem.diffusion_coefficient();
    const auto& p = sigma.pieces().front();
    const auto dp = p.derivative();
    if (p.degree() <= 1) {
        return {"diffusion_c1_lipschitz", ClauseStatus::pass, std::abs(dp(0.0)), "affine sigma"};
    }
    double bound = 0.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double x = -range + 2.0 * range * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        bound = std::max(bound, std::abs(dp(x)));
    }
    return {"diffusion_c1_lipschitz", ClauseStatus::fail, bound,
            "polynomial sigma of degree >= 2 is not globally Lipschitz; value is max |sigma'| on the check range"};
}

double linear_growth_upper_bound(const SdeProblem& problem) {
    const auto& mu = problem.drift_coefficient();
    const auto bps = mu.breakpoints();
    if (bps.empty()) return 0.0;
    const double radius = std::max(std::abs(bps.front()), std::abs(bps.back()));
    double bound = 0.0;
    for (std::size_t k = 1; k < bps.size(); ++k) {
        double s = 0.0;
        double r = 1.0;
        for (double c : mu.pieces()[k].coefficients()) {
            s += std::abs(c) * r;
            r *= radius;
        }
        bound = std::max(bound, s);
    }
    // the outer pieces touch the interval at its endpoints only
    bound = std::max({bound, std::abs(mu.left_limit(0)), std::abs(mu.right_limit(bps.size() - 1))});
    return bound;
}

}  // namespace

ValidationReport validate_assumption1(const SdeProblem& problem, const ValidationOptions& opts) {
    ValidationReport report;
    report.clauses.push_back(check_sigma_nonzero(problem, opts.sigma_zero_tolerance));
    report.clauses.push_back(check_piecewise_lipschitz(problem, opts.grid_points));
    report.clauses.push_back(check_one_sided_lipschitz(problem));
    report.clauses.push_back(check_diffusion_regularity(problem, opts.diffusion_check_range, opts.grid_points));
    report.linear_growth_bound = linear_growth_upper_bound(problem);
    return report;
}

}  // namespace irrsde
