#include "opshift/deriv.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace opshift::deriv {

namespace {

// M_j = sum_k c_k C_{k,j}: matrix coefficients of f(U_0 + t V) as a
// polynomial in t.
std::vector<ComplexMatrix> path_coefficients(const ContractionPair& pair, const Polynomial& f) {
    const int d = pair.dim();
    const int deg = f.degree();
    std::vector<ComplexMatrix> m(std::max(deg + 1, 1), ComplexMatrix(d));

    std::vector<ComplexMatrix> row; // C_{k, 0..k}
    row.push_back(ComplexMatrix::identity(d));
    if (f.coefficient(0) != Complex(0.0))
        m[0] += ComplexMatrix::identity(d) * f.coefficient(0);

    for (int k = 1; k <= deg; ++k) {
        std::vector<ComplexMatrix> next(k + 1, ComplexMatrix(d));
        for (int j = 0; j < k; ++j)
            next[j] += row[j] * pair.u0;
        for (int j = 1; j <= k; ++j)
            next[j] += row[j - 1] * pair.v;
        row = std::move(next);
        const Complex ck = f.coefficient(k);
        if (ck != Complex(0.0))
            for (int j = 0; j <= k; ++j)
                m[j] += row[j] * ck;
    }
    return m;
}

} // namespace

ComplexMatrix derivative_poly_path(const ContractionPair& pair, const Polynomial& f, int n,
                                   double t0) {
    if (n < 0)
        throw std::invalid_argument("derivative_poly_path: order must be >= 0");
    if (!(t0 >= 0.0 && t0 <= 1.0))
        throw std::invalid_argument("derivative_poly_path: t0 must lie in [0, 1]");

    const std::vector<ComplexMatrix> m = path_coefficients(pair, f);
    ComplexMatrix out(pair.dim());
    const int jmax = static_cast<int>(m.size()) - 1;
    for (int j = n; j <= jmax; ++j) {
        // falling factorial j! / (j-n)! and t0^{j-n}
        double coef = 1.0;
        for (int i = 0; i < n; ++i)
            coef *= (j - i);
        coef *= std::pow(t0, j - n);
        if (coef != 0.0)
            out += m[j] * Complex(coef);
    }
    return out;
}

ComplexMatrix derivative_moi(const SpectralUnitary& u0, const ComplexMatrix& v,
                             const Polynomial& f, int n) {
    if (n < 0)
        throw std::invalid_argument("derivative_moi: order must be >= 0");
    u0.validate(); // rejects non-unitary spectral data
    if (v.dim() != u0.dim())
        throw std::invalid_argument("derivative_moi: dimension mismatch");

    if (n == 0) {
        // Spectral functional calculus: f applied groupwise.
        const int d = u0.dim();
        ComplexMatrix diag(d);
        for (const auto& g : u0.groups()) {
            const Complex fz = f(g.eigenvalue);
            for (int c = g.offset; c < g.offset + g.rank; ++c)
                diag(c, c) = fz;
        }
        return u0.from_basis(diag);
    }
    if (n > f.degree())
        return ComplexMatrix(u0.dim());

    std::vector<ComplexMatrix> args(n, v);
    ComplexMatrix t = moi_apply(u0, moi::MoiSymbol::divided_difference(f, n),
                                moi::Region::full(n + 1), args);
    double fact = 1.0;
    for (int i = 2; i <= n; ++i)
        fact *= i;
    return t * Complex(fact);
}

double trace_identity_check(const ContractionPair& pair, const Polynomial& f, int n, double t0) {
    if (n < 1)
        throw std::invalid_argument("trace_identity_check: order must be >= 1");
    const Complex lhs = derivative_poly_path(pair, f, n, t0).trace();
    const Complex rhs = (derivative_poly_path(pair, f.derivative(), n - 1, t0) * pair.v).trace();
    return std::abs(lhs - rhs);
}

ComplexMatrix taylor_remainder(const ContractionPair& pair, const Polynomial& f, int n) {
    if (n < 1)
        throw std::invalid_argument("taylor_remainder: order must be >= 1");
    ComplexMatrix r = f(pair.u0 + pair.v);
    double fact = 1.0;
    for (int j = 0; j < n; ++j) {
        if (j > 0)
            fact *= j;
        r -= derivative_poly_path(pair, f, j, 0.0) * Complex(1.0 / fact);
    }
    return r;
}

ComplexMatrix remainder_via_integral(const ContractionPair& pair, const Polynomial& f, int n) {
    if (n < 1)
        throw std::invalid_argument("remainder_via_integral: order must be >= 1");
    const int d = pair.dim();
    if (f.degree() < n)
        return ComplexMatrix(d);

    const int points = (f.degree() + 1) / 2 + 1;
    const QuadratureRule rule = gauss_legendre_01(points);
    double fact = 1.0;
    for (int i = 2; i < n; ++i)
        fact *= i;

    ComplexMatrix acc(d);
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double w = rule.weights[q] * std::pow(1.0 - t, n - 1) / fact;
        acc += derivative_poly_path(pair, f, n, t) * Complex(w);
    }
    return acc;
}

QuadratureRule gauss_legendre_01(int points) {
    if (points < 1)
        throw std::invalid_argument("gauss_legendre_01: need at least one node");
    QuadratureRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < points; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            if (points == 1)
                p1 = x; // P_1
            for (int k = 2; k <= points; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double pn = points == 1 ? x : p1;
            const double pm = points == 1 ? 1.0 : p0;
            dp = points * (x * pn - pm) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        rule.nodes[i] = (1.0 - x) / 2.0; // map [-1,1] -> [0,1], ascending
        rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace opshift::deriv
