#include "irrsde/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "irrsde/log.hpp"

namespace irrsde {

namespace {

// Same value as mu / (1 + delta |mu|), written so that every operation is
// monotone in |mu|; the bounds |.| <= 1/delta, |.| <= |mu| and monotonicity
// then survive rounding, and mu = +-inf maps to +-1/delta.
inline double tame(double mu, double delta) noexcept {
    const double a = std::abs(mu);
    return std::copysign(std::min(a, 1.0 / (delta + 1.0 / a)), mu);
}

void check_step_size(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("step size must lie in (0, 1), got " + std::to_string(delta));
    }
    static std::atomic<bool> warned{false};
    if (delta >= 0.25 && !warned.exchange(true)) {
        warn("step size " + std::to_string(delta) + " >= 2^-2 may be outside the asymptotic regime");
    }
}

template <class Drift, class Diffusion>
GridSolution run_scheme(Drift&& drift, Diffusion&& diffusion, double x0, const IncrementArray& increments,
                        bool tamed) {
    const double delta = increments.step_size();
    check_step_size(delta);
    GridSolution out;
    out.delta = delta;
    out.values.resize(increments.steps() + 1);
    double x = x0;
    out.values[0] = x;
    for (std::size_t j = 0; j < increments.steps(); ++j) {
        if (!out.overflowed) {
            const double mu = drift(x);
            const double drift_step = tamed ? tame(mu, delta) * delta : mu * delta;
            x = x + drift_step + diffusion(x) * increments.values[j];
            if (!(std::abs(x) <= kOverflowThreshold)) {
                x = std::signbit(x) ? -kOverflowThreshold : kOverflowThreshold;
                out.overflowed = true;
            }
        }
        out.values[j + 1] = x;
    }
    return out;
}

std::size_t refinement_factor(const GridSolution& coarse, const IncrementArray& fine) {
    const std::size_t nc = coarse.steps();
    if (nc == 0 || fine.steps() % nc != 0 || !std::has_single_bit(fine.steps() / nc)) {
        throw std::invalid_argument("fine grid must refine the coarse grid by a power of two");
    }
    return fine.steps() / nc;
}

template <class Drift, class Diffusion>
std::vector<double> interpolate(const GridSolution& coarse, Drift&& drift, Diffusion&& diffusion,
                                const IncrementArray& fine) {
    const std::size_t factor = refinement_factor(coarse, fine);
    const double fine_step = fine.step_size();
    std::vector<double> out(fine.steps() + 1);
    for (std::size_t k = 0; k < coarse.steps(); ++k) {
        const double x = coarse.values[k];
        const std::size_t base = k * factor;
        out[base] = x;
        if (factor == 1) continue;
        const double rate = tame(drift(x), coarse.delta);
        const double vol = diffusion(x);
        double w = 0.0;
        for (std::size_t r = 1; r < factor; ++r) {
            w += fine.values[base + r - 1];
            out[base + r] = x + rate * (static_cast<double>(r) * fine_step) + vol * w;
        }
    }
    out.back() = coarse.values.back();
    return out;
}

}  // namespace

double tame_drift(double mu_val, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("taming requires delta in (0, 1)");
    return tame(mu_val, delta);
}

double tamed_em_step(const SdeProblem& problem, double x, double delta, double dW) {
    return x + tame_drift(problem.drift(x), delta) * delta + problem.diffusion(x) * dW;
}

GridSolution simulate_tamed_em(const SdeProblem& problem, const IncrementArray& increments) {
    return run_scheme([&](double x) { return problem.drift_unchecked(x); },
                      [&](double x) { return problem.diffusion_unchecked(x); }, problem.x0(), increments, true);
}

GridSolution simulate_untamed_em(const SdeProblem& problem, const IncrementArray& increments) {
    return run_scheme([&](double x) { return problem.drift_unchecked(x); },
                      [&](double x) { return problem.diffusion_unchecked(x); }, problem.x0(), increments, false);
}

GridSolution simulate_transformed_tamed_em(const TransformedCoefficients& tc, double z0,
                                           const IncrementArray& increments) {
    return run_scheme([&](double z) { return tc.drift(z); }, [&](double z) { return tc.diffusion(z); }, z0,
                      increments, true);
}

std::vector<double> evaluate_on_fine_grid(const GridSolution& coarse, const SdeProblem& problem,
                                          const IncrementArray& fine_increments) {
    return interpolate(
        coarse, [&](double x) { return problem.drift_unchecked(x); },
        [&](double x) { return problem.diffusion_unchecked(x); }, fine_increments);
}

std::vector<double> evaluate_transformed_on_fine_grid(const GridSolution& coarse, const TransformedCoefficients& tc,
                                                      const IncrementArray& fine_increments) {
    return interpolate(
        coarse, [&](double z) { return tc.drift(z); }, [&](double z) { return tc.diffusion(z); }, fine_increments);
}

}  // namespace irrsde
