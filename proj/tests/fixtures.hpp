#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "irrsde/model.hpp"

namespace irrsde::testing {

inline PiecewisePolynomial constant(double c) { return PiecewisePolynomial::single(Polynomial{{c}}); }

/// mu = -x^3 - x + 1 for x < 0, -x^3 - x - 1 for x >= 0; sigma = 1; x0 = 0.5; T = 1.
inline SdeProblem cubic_jump_problem(double x0 = 0.5, double T = 1.0) {
    PiecewisePolynomial drift({0.0}, {Polynomial{{1.0, -1.0, 0.0, -1.0}}, Polynomial{{-1.0, -1.0, 0.0, -1.0}}});
    return SdeProblem(std::move(drift), constant(1.0), x0, T);
}

inline SdeProblem lipschitz_problem(double x0 = 1.0, double T = 1.0) {
    return SdeProblem(PiecewisePolynomial::single(Polynomial{{0.0, -1.0}}), constant(1.0), x0, T);
}

inline SdeProblem cubic_problem(double x0, double sigma, double T) {
    return SdeProblem(PiecewisePolynomial::single(Polynomial{{0.0, 0.0, 0.0, -1.0}}), constant(sigma), x0, T);
}

inline SdeProblem frozen_problem(double x0 = 1.5, double T = 1.0) {
    return SdeProblem(constant(0.0), constant(0.0), x0, T);
}

inline SdeProblem brownian_problem(double x0 = 0.0, double T = 1.0) {
    return SdeProblem(constant(0.0), constant(1.0), x0, T);
}

/// Naive evaluation sum_i c_i x^i with std::pow; independent of Horner.
inline double naive_poly(const std::vector<double>& c, double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(x, static_cast<double>(i));
    return s;
}

template <class F>
double central_difference(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Solution of x' = -x^3, x(0) = x0.
inline double cubic_ode_solution(double x0, double t) { return x0 / std::sqrt(1.0 + 2.0 * x0 * x0 * t); }

/// (E[sup_{s in [0, delta]} |W_s|^p])^{1/p} by direct simulation of Brownian
/// motion with `substeps` steps, using std::mt19937_64.
inline double brownian_sup_moment(double delta, double p, std::size_t substeps, std::size_t n_paths,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(delta / static_cast<double>(substeps)));
    double acc = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        double w = 0.0;
        double m = 0.0;
        for (std::size_t j = 0; j < substeps; ++j) {
            w += normal(rng);
            m = std::max(m, std::abs(w));
        }
        acc += std::pow(m, p);
    }
    return std::pow(acc / static_cast<double>(n_paths), 1.0 / p);
}

}  // namespace irrsde::testing
