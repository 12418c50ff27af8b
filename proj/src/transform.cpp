#include "irrsde/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irrsde {

namespace {

constexpr double kBumpDerivativeBound = 5.0;  // 2 + max|phi'| rounded up (max|phi'| ~ 1.717)
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Bump {
    double phi;
    double dphi;
    double d2phi;
};

Bump bump(double u) noexcept {
    if (std::abs(u) >= 1.0) return {0.0, 0.0, 0.0};
    const double w = 1.0 - u * u;
    return {w * w * w, -6.0 * u * w * w, w * (30.0 * u * u - 6.0)};
}

// Index of the (unique) breakpoint whose bump support contains x, or kNone.
std::size_t active_bump(std::span<const double> bps, double x, double radius) noexcept {
    const auto it = std::upper_bound(bps.begin(), bps.end(), x);
    const auto idx = static_cast<std::size_t>(it - bps.begin());
    if (idx < bps.size() && bps[idx] - x < radius) return idx;
    if (idx > 0 && x - bps[idx - 1] < radius) return idx - 1;
    return kNone;
}

}  // namespace

TransformG::TransformG(std::vector<double> breakpoints, std::vector<double> alphas, double nu)
    : breakpoints_(std::move(breakpoints)), alphas_(std::move(alphas)), nu_(nu) {
    if (breakpoints_.size() != alphas_.size()) throw std::invalid_argument("one alpha per breakpoint required");
    if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw std::invalid_argument("bump radius must be positive");
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
        if (!std::isfinite(alphas_[k]) || !std::isfinite(breakpoints_[k])) {
            throw std::invalid_argument("transform parameters must be finite");
        }
        if (k > 0 && breakpoints_[k] - breakpoints_[k - 1] < 2.0 * nu_) {
            throw std::invalid_argument("bump supports overlap");
        }
    }
}

TransformG TransformG::build(const SdeProblem& problem) {
    const auto bps = problem.breakpoints();
    if (bps.empty()) return TransformG{};
    std::vector<double> alphas(bps.size());
    double max_alpha = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bps.size(); ++k) {
        const double s = problem.diffusion(bps[k]);
        if (std::abs(s) <= 1e-12) {
            throw std::invalid_argument("diffusion vanishes at breakpoint " + std::to_string(bps[k]));
        }
        alphas[k] = problem.drift_jump(k) / (2.0 * s * s);
        max_alpha = std::max(max_alpha, std::abs(alphas[k]));
        if (k > 0) min_gap = std::min(min_gap, bps[k] - bps[k - 1]);
    }
    const double nu = std::min({0.5 * min_gap, 1.0, 1.0 / (2.0 * max_alpha * kBumpDerivativeBound + 1.0)});
    return TransformG({bps.begin(), bps.end()}, std::move(alphas), nu);
}

double TransformG::value(double x) const noexcept {
    const auto k = active_bump(breakpoints_, x, nu_);
    if (k == kNone) return x;
    const double d = x - breakpoints_[k];
    return x + alphas_[k] * d * std::abs(d) * bump(d / nu_).phi;
}

double TransformG::first_derivative(double x) const noexcept {
    const auto k = active_bump(breakpoints_, x, nu_);
    if (k == kNone) return 1.0;
    const double d = x - breakpoints_[k];
    const double a = std::abs(d);
    const auto b = bump(d / nu_);
    return 1.0 + alphas_[k] * (2.0 * a * b.phi + d * a * b.dphi / nu_);
}

double TransformG::second_derivative(double x) const noexcept {
    const auto k = active_bump(breakpoints_, x, nu_);
    if (k == kNone) return 0.0;
    const double d = x - breakpoints_[k];
    const double a = std::abs(d);
    const double sign = d >= 0.0 ? 1.0 : -1.0;
    const auto b = bump(d / nu_);
    return alphas_[k] * (2.0 * sign * b.phi + 4.0 * a * b.dphi / nu_ + d * a * b.d2phi / (nu_ * nu_));
}

double TransformG::max_displacement() const noexcept {
    double m = 0.0;
    for (double a : alphas_) m = std::max(m, std::abs(a));
    return m * nu_ * nu_;
}

double TransformG::identity_radius() const noexcept {
    if (breakpoints_.empty()) return 0.0;
    return std::max(std::abs(breakpoints_.front()), std::abs(breakpoints_.back())) + nu_;
}

bool TransformG::satisfies_derivative_bounds() const noexcept {
    return std::all_of(alphas_.begin(), alphas_.end(),
                       [&](double a) { return nu_ * std::abs(a) * kBumpDerivativeBound < 0.5; });
}

double TransformG::inverse(double y) const noexcept {
    if (breakpoints_.empty()) return y;
    // G(y) = y whenever y lies outside every bump, and G maps each bump into
    // itself widened by the displacement bound.
    const double displacement = max_displacement();
    if (active_bump(breakpoints_, y, nu_ + displacement) == kNone) return y;

    const double tol = 1e-13 * (1.0 + std::abs(y));
    double lo = y - (displacement + 1.0);
    double hi = y + (displacement + 1.0);
    double x = y;
    double f = value(x) - y;
    for (int iter = 0; iter < 200 && std::abs(f) > tol; ++iter) {
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        double next = x - f / first_derivative(x);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
        f = value(x) - y;
    }
    // one polishing step; Newton converges quadratically so this reaches round-off
    const double polished = x - f / first_derivative(x);
    if (polished > lo && polished < hi && std::abs(value(polished) - y) <= std::abs(f)) x = polished;
    return x;
}

double TransformedCoefficients::drift(double z) const noexcept {
    const double x = g_.inverse(z);
    const double s = problem_.diffusion_unchecked(x);
    return g_.first_derivative(x) * problem_.drift_unchecked(x) + 0.5 * g_.second_derivative(x) * s * s;
}

double TransformedCoefficients::diffusion(double z) const noexcept {
    const double x = g_.inverse(z);
    return g_.first_derivative(x) * problem_.diffusion_unchecked(x);
}

bool SelfCheckReport::all_pass() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second.pass; });
}

double transformed_drift_jump(const TransformedCoefficients& tc, std::size_t k) {
    const auto bps = tc.transform().breakpoints();
    if (k >= bps.size()) throw std::out_of_range("breakpoint index out of range");
    const double z = tc.transform()(bps[k]);
    auto diff = [&](double h) { return tc.drift(z + h) - tc.drift(z - h); };
    const double d1 = diff(1e-3);
    const double d2 = diff(1e-4);
    const double d3 = diff(1e-5);
    // two Richardson levels with ratio 10 remove the O(h) and O(h^2) terms
    const double r12 = (10.0 * d2 - d1) / 9.0;
    const double r23 = (10.0 * d3 - d2) / 9.0;
    return (100.0 * r23 - r12) / 99.0;
}

SelfCheckReport transform_selfcheck(const SdeProblem& problem, const TransformG& g) {
    SelfCheckReport report;
    const auto bps = g.breakpoints();
    const double nu = g.nu();
    const TransformedCoefficients tc(problem, g);

    double worst = 0.0;
    for (double z : bps) worst = std::max(worst, std::abs(g.first_derivative(z) - 1.0));
    report.checks["derivative_one_at_breakpoints"] = {worst <= 1e-12, worst, 1e-12};

    const double lo = bps.empty() ? -1.0 : bps.front() - 2.0 * nu;
    const double hi = bps.empty() ? 1.0 : bps.back() + 2.0 * nu;

    worst = 0.0;
    {
        constexpr std::size_t n = 2000;
        const double a = lo - 10.0;
        const double b = hi + 10.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
            const bool outside = std::all_of(bps.begin(), bps.end(), [&](double z) { return std::abs(x - z) >= nu; });
            if (outside) worst = std::max(worst, std::abs(g.first_derivative(x) - 1.0));
        }
    }
    report.checks["derivative_one_outside_bumps"] = {worst == 0.0, worst, 0.0};

    worst = 0.0;
    {
        constexpr std::size_t n = 10000;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            worst = std::max(worst, std::abs(g.first_derivative(x) - 1.0));
        }
    }
    report.checks["derivative_within_half_and_three_halves"] = {worst <= 0.5, worst, 0.5};

    worst = 0.0;
    for (std::size_t k = 0; k < bps.size(); ++k) worst = std::max(worst, std::abs(transformed_drift_jump(tc, k)));
    report.checks["transformed_drift_continuous"] = {worst <= 1e-6, worst, 1e-6};

    worst = 0.0;
    {
        constexpr std::size_t n = 5000;
        const double a = std::min(-10.0, lo);
        const double b = std::max(10.0, hi);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            for (double x : {a + (b - a) * t, lo + (hi - lo) * t}) {
                worst = std::max(worst, std::abs(g.inverse(g(x)) - x));
            }
        }
    }
    report.checks["inverse_round_trip"] = {worst <= 1e-12, worst, 1e-12};
    return report;
}

}  // namespace irrsde
