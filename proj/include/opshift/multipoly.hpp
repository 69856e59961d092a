#pragma once

#include <map>
#include <span>
#include <vector>

#include "opshift/polynomial.hpp"

namespace opshift::poly {

/// Sparse multivariate polynomial: exponent tuple -> coefficient. Workspace
/// for exact iterated integration of polynomial integrands; zero
/// coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(int var_count) : vars_(var_count) {}

    static MultiPoly constant(int var_count, Complex c);
    /// x_index as a polynomial.
    static MultiPoly variable(int var_count, int index);
    /// c0 + sum_i ci * x_i.
    static MultiPoly affine(int var_count, Complex c0, std::span<const Complex> ci);
    /// h(inner) by Horner over the coefficient list of h.
    static MultiPoly compose(const Polynomial& h, const MultiPoly& inner);

    int var_count() const { return vars_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<std::vector<int>, Complex>& terms() const { return terms_; }

    void add_term(std::vector<int> exponents, Complex c);
    Complex constant_value() const; // requires all exponents zero

    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator*=(Complex s);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

    Complex eval(std::span<const Complex> point) const;

    /// Antiderivative in variable `var` (power rule).
    MultiPoly antiderivative(int var) const;
    /// Substitute variable `var` by variable `other` (exponents merge).
    MultiPoly substitute_var(int var, int other) const;
    /// Substitute variable `var` by a constant.
    MultiPoly substitute_value(int var, Complex value) const;

private:
    int vars_;
    std::map<std::vector<int>, Complex> terms_;
};

/// Exact integral over the ordered simplex 0 <= x_0 <= x_1 <= ... <=
/// x_{m-1} <= 1 by iterated antidifferentiation: integrate x_0 with upper
/// limit x_1, then x_1 with upper limit x_2, ..., the last variable to 1.
Complex integrate_simplex(const MultiPoly& p);

/// Same chain with the outermost upper limit kappa instead of 1.
Complex integrate_simplex_scaled(const MultiPoly& p, double kappa);

} // namespace opshift::poly
