#include "opshift/symbols.hpp"

#include "opshift/deriv.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace opshift::poly {

namespace {

constexpr double kCoincident = 1e-12;

// integral_0^kappa q(t) dt for a univariate q.
Complex integral_0_kappa(const Polynomial& q, double kappa) {
    Complex total = 0.0;
    double kap_pow = kappa;
    const auto& c = q.coefficients();
    for (size_t j = 0; j < c.size(); ++j) {
        total += c[j] * kap_pow / static_cast<double>(j + 1);
        kap_pow *= kappa;
    }
    return total;
}

Polynomial shift_power(const Polynomial& q, int p) {
    if (q.is_zero())
        return {};
    std::vector<Complex> c(q.coefficients().size() + p);
    for (size_t j = 0; j < q.coefficients().size(); ++j)
        c[j + p] = q.coefficients()[j];
    return Polynomial(std::move(c));
}

} // namespace

namespace {

// Exact tensor Gauss-Legendre evaluation of the weighted simplex integral.
// The ordered simplex 0 <= x_0 <= ... <= x_{n-1} <= 1 maps to the unit cube
// by x_i = prod_{j >= i} sigma_j with Jacobian prod_j sigma_j^j; the affine
// argument stays inside the unit disc (it is a convex combination of the
// nodes), so no cancellation occurs at any quadrature point. Preferred over
// the monomial expansion at higher degrees, where the expanded coefficients
// grow like (2n+1)^deg and wreck double precision.
Complex eval_phi_quadrature(const SymbolPhi& sym, std::span<const Complex> nodes) {
    const int n = sym.order;
    const int deg = std::max(sym.h.degree(), 0);
    const int max_axis_degree = deg + sym.m + sym.k + (n - 1);
    const auto rule = opshift::deriv::gauss_legendre_01(max_axis_degree / 2 + 1);
    const int q = static_cast<int>(rule.nodes.size());

    std::vector<Complex> coeff(n);
    for (int i = 0; i < n; ++i)
        coeff[i] = nodes[i] - nodes[i + 1];

    std::vector<int> pick(n, 0);
    std::vector<double> x(n);
    Complex total = 0.0;
    while (true) {
        double weight = 1.0;
        double acc = 1.0; // prod_{j >= i} sigma_j, built from the outside in
        double jac = 1.0;
        for (int j = n - 1; j >= 0; --j) {
            const double sigma = rule.nodes[pick[j]];
            weight *= rule.weights[pick[j]];
            for (int rep = 0; rep < j; ++rep)
                jac *= sigma;
            acc *= sigma;
            x[j] = acc;
        }
        Complex u = nodes[n];
        for (int i = 0; i < n; ++i)
            u += coeff[i] * x[i];
        double poly_weight = jac;
        for (int rep = 0; rep < sym.m; ++rep)
            poly_weight *= x[1];
        for (int rep = 0; rep < sym.k; ++rep)
            poly_weight *= x[0];
        total += sym.h(u) * (weight * poly_weight);

        int pos = n - 1;
        while (pos >= 0 && ++pick[pos] == q) {
            pick[pos] = 0;
            --pos;
        }
        if (pos < 0)
            break;
    }
    return total;
}

} // namespace

Complex eval_phi(const SymbolPhi& sym, std::span<const Complex> nodes) {
    const int n = sym.order;
    if (n < 1)
        throw std::invalid_argument("eval_phi: order must be >= 1");
    if (static_cast<int>(nodes.size()) != n + 1)
        throw std::invalid_argument("eval_phi: need order+1 nodes");
    if (sym.m < 0 || sym.k < 0)
        throw std::invalid_argument("eval_phi: negative weight exponent");

    const int total_degree = std::max(sym.h.degree(), 0) + sym.m + sym.k;

    if (n == 1) {
        if (total_degree <= 10) {
            const Polynomial q =
                shift_power(sym.h.compose_affine(nodes[1], nodes[0] - nodes[1]), sym.k);
            return integral_0_kappa(q, 1.0);
        }
        // 1-D Gauss-Legendre, exact and well conditioned at high degree.
        const auto rule = opshift::deriv::gauss_legendre_01((sym.h.degree() + sym.k) / 2 + 1);
        Complex total = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            const double t = rule.nodes[i];
            total += sym.h(nodes[1] + (nodes[0] - nodes[1]) * Complex(t)) *
                     (rule.weights[i] * std::pow(t, sym.k));
        }
        return total;
    }

    // The expanded coefficients scale like (2n+1)^degree; stay well clear of
    // the point where that eats the 1e-9 identity tolerances.
    if (total_degree > 6)
        return eval_phi_quadrature(sym, nodes);

    // Variables (s, t, t_3, ..., t_n): var i carries coefficient l_i - l_{i+1}.
    std::vector<Complex> coeff(n);
    for (int i = 0; i < n; ++i)
        coeff[i] = nodes[i] - nodes[i + 1];
    MultiPoly integrand = MultiPoly::compose(sym.h, MultiPoly::affine(n, nodes[n], coeff));

    std::vector<int> weight(n, 0);
    weight[0] = sym.k; // s-exponent
    weight[1] = sym.m; // t-exponent
    MultiPoly w(n);
    w.add_term(std::move(weight), 1.0);
    return integrate_simplex(integrand * w);
}

Complex phi_hm(const Polynomial& h, int m, Complex lambda, Complex mu) {
    if (m < 0)
        throw std::invalid_argument("phi_hm: weight exponent must be >= 0");
    const Polynomial q = shift_power(h.compose_affine(lambda, mu - lambda), m);
    return integral_0_kappa(q, 1.0);
}

double check_base_decomp(const Polynomial& h, int m, Complex lambda, Complex xi, Complex mu) {
    if (std::abs(lambda - mu) <= kCoincident)
        throw std::invalid_argument("check_base_decomp: lambda = mu leaves the formula undefined");
    const Complex lhs = phi_hm(h, m, lambda, mu);

    const Complex a = (xi - lambda) / (mu - lambda);
    const Complex b = (mu - xi) / (mu - lambda);
    Complex rhs = std::pow(a, m + 1) * phi_hm(h, m, lambda, xi) +
                  std::pow(b, m + 1) * phi_hm(h, m, xi, mu);
    for (int k = 0; k < m; ++k)
        rhs += binomial(m, k) * std::pow(b, k + 1) * std::pow(a, m - k) * phi_hm(h, k, xi, mu);
    return std::abs(lhs - rhs);
}

double check_green_identity(GreenKind kind, const Polynomial& h, int mk, double kappa,
                            Complex lambda, Complex xi, Complex mu) {
    if (mk < 1)
        throw std::invalid_argument("check_green_identity: weight exponent must be >= 1");
    if (!(kappa > 0.0) || kappa > 1.0)
        throw std::invalid_argument("check_green_identity: kappa must lie in (0, 1]");

    if (kind == GreenKind::tmh) {
        const int m = mk;
        if (std::abs(lambda - mu) <= kCoincident)
            throw std::invalid_argument("check_green_identity(tmh): requires lambda != mu");

        // LHS: weight t^{m-1}, argument kappa*xi + (mu-xi) t + (lambda-mu) s.
        const Complex coeff[2] = {lambda - mu, mu - xi};
        MultiPoly integrand =
            MultiPoly::compose(h, MultiPoly::affine(2, kappa * xi, coeff));
        MultiPoly w(2);
        w.add_term({0, m - 1}, 1.0);
        const Complex lhs = integrate_simplex_scaled(integrand * w, kappa);

        auto half = [&](Complex dir) {
            // integral_0^kappa (kappa^m - t^m) h(kappa xi + dir t) dt
            const Polynomial q = h.compose_affine(kappa * xi, dir);
            return std::pow(kappa, m) * integral_0_kappa(q, kappa) -
                   integral_0_kappa(shift_power(q, m), kappa);
        };
        const Complex rhs = ((xi - lambda) / (mu - lambda)) * half(lambda - xi) / double(m) +
                            ((mu - xi) / (mu - lambda)) * half(mu - xi) / double(m);
        return std::abs(lhs - rhs);
    }

    const int k = mk;
    if (std::abs(lambda - xi) <= kCoincident)
        throw std::invalid_argument("check_green_identity(tkh): requires lambda != xi");

    // LHS: weight s^{k-1}, argument kappa*xi + (lambda-xi) t + (mu-lambda) s.
    const Complex coeff[2] = {mu - lambda, lambda - xi};
    MultiPoly integrand = MultiPoly::compose(h, MultiPoly::affine(2, kappa * xi, coeff));
    MultiPoly w(2);
    w.add_term({k - 1, 0}, 1.0);
    const Complex lhs = integrate_simplex_scaled(integrand * w, kappa);

    auto tail = [&](Complex base, Complex dir) {
        // integral_0^kappa t^k h(base + dir t) dt
        return integral_0_kappa(shift_power(h.compose_affine(base, dir), k), kappa);
    };
    const Complex rhs = ((mu - lambda) / (xi - lambda)) * tail(kappa * lambda, mu - lambda) / double(k) -
                        ((mu - xi) / (xi - lambda)) * tail(kappa * xi, mu - xi) / double(k);
    return std::abs(lhs - rhs);
}

double check_tmkh(TmkhPart part, int n, const Polynomial& h, int mk,
                  std::span<const Complex> nodes) {
    if (n < 2)
        throw std::invalid_argument("check_tmkh: order must be >= 2");
    if (mk < 1)
        throw std::invalid_argument("check_tmkh: weight exponent must be >= 1");
    if (static_cast<int>(nodes.size()) != n + 1)
        throw std::invalid_argument("check_tmkh: need n+1 nodes");

    std::vector<Complex> drop1(nodes.begin(), nodes.end()); // without nodes[1]
    drop1.erase(drop1.begin() + 1);

    if (part == TmkhPart::i) {
        const int m = mk;
        if (std::abs(nodes[0] - nodes[1]) <= kCoincident)
            throw std::invalid_argument("check_tmkh(i): requires nodes[0] != nodes[1]");
        std::vector<Complex> drop0(nodes.begin() + 1, nodes.end());

        const Complex lhs = eval_phi({n, h, m - 1, 0}, nodes);
        const Complex r = (nodes[2] - nodes[1]) / (nodes[1] - nodes[0]);
        const Complex rhs =
            (1.0 + r) / double(m) *
                (eval_phi({n - 1, h, m, 0}, drop1) - eval_phi({n - 1, h, 0, m}, drop1)) +
            r / double(m) *
                (eval_phi({n - 1, h, 0, m}, drop0) - eval_phi({n - 1, h, m, 0}, drop0));
        return std::abs(lhs - rhs);
    }

    const int k = mk;
    if (std::abs(nodes[1] - nodes[2]) <= kCoincident)
        throw std::invalid_argument("check_tmkh(ii): requires nodes[1] != nodes[2]");
    std::vector<Complex> drop2(nodes.begin(), nodes.end());
    drop2.erase(drop2.begin() + 2);

    const Complex lhs = eval_phi({n, h, 0, k - 1}, nodes);
    const Complex r = (nodes[1] - nodes[0]) / (nodes[2] - nodes[1]);
    const Complex rhs = (1.0 + r) / double(k) * eval_phi({n - 1, h, 0, k}, drop1) -
                        r / double(k) * eval_phi({n - 1, h, 0, k}, drop2);
    return std::abs(lhs - rhs);
}

double diagonal_constant(int n, int m, int k) {
    if (n < 1 || m < 1 || k < 1)
        throw std::invalid_argument("diagonal_constant: requires n, m, k >= 1");
    if (n == 1)
        return 1.0 / k; // one-variable convention: only the s-weight survives
    MultiPoly w(n);
    std::vector<int> e(n, 0);
    e[0] = k - 1;
    e[1] = m - 1;
    w.add_term(std::move(e), 1.0);
    return integrate_simplex(w).real();
}

} // namespace opshift::poly
