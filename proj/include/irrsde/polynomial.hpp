#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace irrsde {

/// Dense polynomial, coefficients in increasing degree order (c0 + c1 x + ...).
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    double operator()(double x) const noexcept;

    /// Degree after dropping trailing zero coefficients; the zero polynomial has degree 0.
    std::size_t degree() const noexcept;
    double leading_coefficient() const noexcept;
    Polynomial derivative() const;

    std::span<const double> coefficients() const noexcept { return coeffs_; }
    bool operator==(const Polynomial&) const = default;

private:
    std::vector<double> coeffs_;
};

/**
 * Piecewise polynomial on the real line.
 *
 * Pieces cover (-inf, b_1), [b_1, b_2), ..., [b_m, inf). At a breakpoint the
 * function takes the value of the piece on its right.
 */
class PiecewisePolynomial {
public:
    PiecewisePolynomial() : pieces_{Polynomial{{0.0}}} {}

    /// Throws std::invalid_argument on unsorted breakpoints, piece count
    /// mismatch or non-finite coefficients.
    PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

    static PiecewisePolynomial single(Polynomial p) { return PiecewisePolynomial({}, {std::move(p)}); }

    double operator()(double x) const noexcept { return pieces_[piece_index(x)](x); }
    double derivative_at(double x) const noexcept;

    /// Index of the piece whose half-open interval contains x.
    std::size_t piece_index(double x) const noexcept;

    double left_limit(std::size_t k) const;
    double right_limit(std::size_t k) const;

    std::size_t max_degree() const noexcept;
    PiecewisePolynomial derivative() const;

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const Polynomial> pieces() const noexcept { return pieces_; }
    std::size_t num_breakpoints() const noexcept { return breakpoints_.size(); }

private:
    std::vector<double> breakpoints_;
    std::vector<Polynomial> pieces_;
};

}  // namespace irrsde
