#pragma once

#include <span>
#include <vector>

#include "opshift/complex_matrix.hpp"

namespace opshift::poly {

using numlin::Complex;

/// Univariate polynomial with complex coefficients, index = power. Trailing
/// zero coefficients are trimmed; the zero polynomial stores nothing.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs);
    Polynomial(std::initializer_list<double> real_coeffs);

    static Polynomial monomial(int power, Complex coeff = 1.0);

    /// degree of the zero polynomial is -1.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Complex>& coefficients() const { return c_; }
    Complex coefficient(int power) const;

    Complex operator()(Complex z) const;

    Polynomial derivative(int n = 1) const;
    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const;
    /// p(a + b t) as a polynomial in t.
    Polynomial compose_affine(Complex a, Complex b) const;

    /// f(X) for a square matrix argument (Horner).
    numlin::ComplexMatrix operator()(const numlin::ComplexMatrix& x) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(Complex s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    void trim();
    std::vector<Complex> c_;
};

/// max |f(e^{i theta})|: 4096-point grid followed by golden-section
/// refinement around the best grid points; good to ~1e-6 relative for
/// degrees up to 64.
double sup_norm_circle(const Polynomial& f);

/// n-th divided difference f^{[n]} at nodes (length n+1, closed unit disc).
/// Nodes within 1e-12 of each other are treated as coincident and take the
/// derivative branch of the recursion (confluent Newton table).
Complex divided_difference(const Polynomial& f, std::span<const Complex> nodes);

/// f^{[n]} for f = z^k: the complete homogeneous symmetric sum
/// of degree k - n over the nodes, via the one-pass recurrence (O(k n)).
Complex divided_difference_monomial(int k, std::span<const Complex> nodes);

/// Random polynomial with Gaussian coefficients, degree in [min_deg, max_deg].
Polynomial random_polynomial(int min_deg, int max_deg, numlin::SplitRng& rng);

/// Binomial coefficient from a cached Pascal table (exact for n <= 64).
double binomial(int n, int k);

} // namespace opshift::poly
