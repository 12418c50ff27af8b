#include "irrsde/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace irrsde {

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
    }
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::size_t Polynomial::degree() const noexcept {
    std::size_t d = coeffs_.size() - 1;
    while (d > 0 && coeffs_[d] == 0.0) --d;
    return d;
}

double Polynomial::leading_coefficient() const noexcept { return coeffs_[degree()]; }

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{{0.0}};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
    return Polynomial{std::move(d)};
}

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)) {
    if (pieces_.size() != breakpoints_.size() + 1) {
        throw std::invalid_argument("expected " + std::to_string(breakpoints_.size() + 1) + " pieces, got " +
                                    std::to_string(pieces_.size()));
    }
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i])) throw std::invalid_argument("breakpoint is not finite");
        if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i])) {
            throw std::invalid_argument("breakpoints must be strictly increasing");
        }
    }
}

std::size_t PiecewisePolynomial::piece_index(double x) const noexcept {
    return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x) -
                                    breakpoints_.begin());
}

double PiecewisePolynomial::derivative_at(double x) const noexcept {
    const auto& c = pieces_[piece_index(x)].coefficients();
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * c[i];
    return acc;
}

double PiecewisePolynomial::left_limit(std::size_t k) const {
    if (k >= breakpoints_.size()) throw std::out_of_range("breakpoint index out of range");
    return pieces_[k](breakpoints_[k]);
}

double PiecewisePolynomial::right_limit(std::size_t k) const {
    if (k >= breakpoints_.size()) throw std::out_of_range("breakpoint index out of range");
    return pieces_[k + 1](breakpoints_[k]);
}

std::size_t PiecewisePolynomial::max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& p : pieces_) d = std::max(d, p.degree());
    return d;
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const auto& p : pieces_) d.push_back(p.derivative());
    return PiecewisePolynomial(breakpoints_, std::move(d));
}

}  // namespace irrsde
