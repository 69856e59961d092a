#pragma once

#include <complex>
#include <span>
#include <vector>

#include "opshift/rng.hpp"

namespace opshift::numlin {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. The basic operator representation;
/// dimensions stay small (<= ~128) so everything is plain O(d^3) arithmetic.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    bool empty() const { return dim_ == 0; }

    Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    const Complex& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

    std::span<const Complex> data() const { return a_; }
    std::span<Complex> data() { return a_; }

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    ComplexMatrix adjoint() const;
    Complex trace() const;
    double frobenius_norm() const;
    double max_abs() const;
    bool all_finite() const;

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    int dim_ = 0;
    std::vector<Complex> a_;
};

/// a * b^H without forming the adjoint.
ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b);
/// a^H * b without forming the adjoint.
ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matrix_power(const ComplexMatrix& a, int k);

/// Entries drawn i.i.d. complex Gaussian.
ComplexMatrix random_gaussian_matrix(int dim, SplitRng& rng);

} // namespace opshift::numlin
