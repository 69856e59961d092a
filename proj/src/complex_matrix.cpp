#include "opshift/complex_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace opshift::numlin {

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        m(i, i) = 1.0;
    return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (dim_ != o.dim_)
        throw std::invalid_argument("matrix dimension mismatch");
    for (size_t i = 0; i < a_.size(); ++i)
        a_[i] += o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (dim_ != o.dim_)
        throw std::invalid_argument("matrix dimension mismatch");
    for (size_t i = 0; i < a_.size(); ++i)
        a_[i] -= o.a_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& v : a_)
        v *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_)
        throw std::invalid_argument("matrix dimension mismatch");
    const int d = a.dim_;
    ComplexMatrix c(d);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0))
                continue;
            for (int j = 0; j < d; ++j)
                c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            m(j, i) = std::conj((*this)(i, j));
    return m;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (int i = 0; i < dim_; ++i)
        t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : a_)
        s += std::norm(v);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : a_)
        m = std::max(m, std::abs(v));
    return m;
}

bool ComplexMatrix::all_finite() const {
    for (const auto& v : a_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("matrix dimension mismatch");
    const int d = a.dim();
    ComplexMatrix c(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < d; ++k)
                s += a(i, k) * std::conj(b(j, k));
            c(i, j) = s;
        }
    return c;
}

ComplexMatrix adjoint_multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("matrix dimension mismatch");
    const int d = a.dim();
    ComplexMatrix c(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i) {
            const Complex aki = std::conj(a(k, i));
            if (aki == Complex(0.0))
                continue;
            for (int j = 0; j < d; ++j)
                c(i, j) += aki * b(k, j);
        }
    return c;
}

ComplexMatrix matrix_power(const ComplexMatrix& a, int k) {
    if (k < 0)
        throw std::invalid_argument("matrix_power: negative exponent");
    ComplexMatrix r = ComplexMatrix::identity(a.dim());
    ComplexMatrix base = a;
    while (k > 0) {
        if (k & 1)
            r = r * base;
        k >>= 1;
        if (k)
            base = base * base;
    }
    return r;
}

ComplexMatrix random_gaussian_matrix(int dim, SplitRng& rng) {
    ComplexMatrix m(dim);
    for (auto& v : m.data())
        v = rng.gaussian();
    return m;
}

} // namespace opshift::numlin
