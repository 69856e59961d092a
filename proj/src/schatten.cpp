#include "opshift/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace opshift::numlin {

namespace {

double offdiag_mass(const ComplexMatrix& a) {
    double s = 0.0;
    const int d = a.dim();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (i != j)
                s += std::norm(a(i, j));
    return std::sqrt(s);
}

} // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
    const int d = h.dim();
    if (d == 0)
        return {};

    double scale = std::max(1.0, h.max_abs());
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j)
            if (std::abs(h(i, j) - std::conj(h(j, i))) > 1e-10 * scale)
                throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");

    ComplexMatrix a = h;
    const double target = 1e-13 * std::max(offdiag_mass(a), std::numeric_limits<double>::min());
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (offdiag_mass(a) > target) {
        if (++sweep > kMaxSweeps)
            throw std::runtime_error("hermitian_eigenvalues: Jacobi did not converge within sweep cap");
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const Complex apq = a(p, q);
                const double abs_apq = std::abs(apq);
                if (abs_apq == 0.0)
                    continue;
                // Phase-rotate so the 2x2 block becomes real symmetric, then
                // apply the classical Jacobi rotation annihilating (p,q).
                const Complex u = apq / abs_apq; // a(p,q) = |apq| * u
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * abs_apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns: J has columns (p,q) -> (c*u_p - s..., ) with the
                // combined unitary J = diag(u,1) * [[c, s],[-s, c]] acting on
                // the (p,q) plane: col_p' = c*u*col_p - s*col_q is realized
                // through explicit row/column updates below.
                for (int k = 0; k < d; ++k) {
                    const Complex akp = a(k, p) * u; // absorb phase into column p
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const Complex apk = std::conj(u) * a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);
            }
        }
    }

    std::vector<double> ev(d);
    for (int i = 0; i < d; ++i)
        ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

std::vector<double> singular_values(const ComplexMatrix& x) {
    ComplexMatrix g = adjoint_multiply(x, x);
    // Symmetrize away round-off before the Hermitian check.
    const int d = g.dim();
    for (int i = 0; i < d; ++i) {
        g(i, i) = Complex(g(i, i).real(), 0.0);
        for (int j = i + 1; j < d; ++j) {
            const Complex m = 0.5 * (g(i, j) + std::conj(g(j, i)));
            g(i, j) = m;
            g(j, i) = std::conj(m);
        }
    }
    std::vector<double> ev = hermitian_eigenvalues(g);
    for (auto& v : ev)
        v = std::sqrt(std::max(v, 0.0));
    return ev;
}

double schatten_norm(const ComplexMatrix& x, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("schatten_norm: exponent must satisfy p >= 1");
    const std::vector<double> sv = singular_values(x);
    if (sv.empty())
        return 0.0;
    if (std::isinf(p))
        return sv.front();
    // sv is sorted descending; factor out the head for stable powers.
    const double top = sv.front();
    if (top == 0.0)
        return 0.0;
    double s = 0.0;
    for (double v : sv)
        s += std::pow(v / top, p);
    return top * std::pow(s, 1.0 / p);
}

double operator_norm(const ComplexMatrix& x) {
    return schatten_norm(x, std::numeric_limits<double>::infinity());
}

double trace_norm(const ComplexMatrix& x) {
    return schatten_norm(x, 1.0);
}

} // namespace opshift::numlin
