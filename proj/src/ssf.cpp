#include "opshift/ssf.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace opshift::ssf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kTwoPiI(0.0, kTwoPi);

} // namespace

Complex SSFSeries::at_angle(double theta) const {
    Complex v = 0.0;
    for (size_t j = 0; j < coeffs.size(); ++j)
        v += coeffs[j] * std::polar(1.0, -static_cast<double>(j + 1) * theta);
    return v;
}

Complex remainder_moment(const ContractionPair& pair, int n, int k) {
    if (k < 0)
        throw std::invalid_argument("remainder_moment: power must be >= 0");
    if (k < n)
        return 0.0;
    return deriv::taylor_remainder(pair, Polynomial::monomial(k), n).trace();
}

SSFSeries reconstruct_ssf(const ContractionPair& pair, int n, int K) {
    if (n < 1)
        throw std::invalid_argument("reconstruct_ssf: order must be >= 1");
    if (K < 1)
        throw std::invalid_argument("reconstruct_ssf: truncation must be >= 1");
    SSFSeries s;
    s.order = n;
    s.coeffs.resize(K);
    for (int k = n; k < n + K; ++k) {
        // (k-n)! / k! = 1 / (k (k-1) ... (k-n+1))
        double falling = 1.0;
        for (int i = 0; i < n; ++i)
            falling *= (k - i);
        s.coeffs[k - n] = remainder_moment(pair, n, k) / (kTwoPiI * falling);
    }
    return s;
}

Complex pairing(const Polynomial& phi, const SSFSeries& s) {
    // Closed form: <z^m, e^{-ij theta}> = 2 pi i when j = m + 1, else 0.
    Complex closed = 0.0;
    const auto& a = phi.coefficients();
    for (size_t m = 0; m < a.size(); ++m)
        if (m + 1 <= s.coeffs.size())
            closed += a[m] * s.coeffs[m];
    closed *= kTwoPiI;

    // Trapezoid on the circle, spectrally exact for trigonometric polynomials.
    constexpr int kQuad = 2048;
    Complex quad = 0.0;
    for (int i = 0; i < kQuad; ++i) {
        const double theta = kTwoPi * i / kQuad;
        const Complex z = std::polar(1.0, theta);
        quad += phi(z) * s.at_angle(theta) * Complex(0.0, 1.0) * z;
    }
    quad *= kTwoPi / kQuad;

    if (std::abs(closed - quad) > 1e-9) {
        std::ostringstream msg;
        msg << "pairing: closed form and quadrature disagree by " << std::abs(closed - quad)
            << " (convention fault)";
        throw std::runtime_error(msg.str());
    }
    return closed;
}

double verify_trace_formula(const ContractionPair& pair, int n, const Polynomial& f, int K) {
    // The K reconstructed coefficients cover the monomials z^n .. z^{n+K-1}.
    if (f.degree() > K + n - 1) {
        std::ostringstream msg;
        msg << "verify_trace_formula: truncation K = " << K << " too small for degree "
            << f.degree() << "; need K >= " << f.degree() - n + 1;
        throw std::invalid_argument(msg.str());
    }
    const Complex lhs = deriv::taylor_remainder(pair, f, n).trace();
    const SSFSeries eta = reconstruct_ssf(pair, n, K);
    const Complex rhs = pairing(f.derivative(n), eta);
    return std::abs(lhs - rhs);
}

double l1_estimate(const SSFSeries& s, int grid_points) {
    if (grid_points < 8)
        throw std::invalid_argument("l1_estimate: grid too small");
    double total = 0.0;
    for (int i = 0; i < grid_points; ++i)
        total += std::abs(s.at_angle(kTwoPi * i / grid_points));
    return total * kTwoPi / grid_points;
}

Complex averaged_functional(const ContractionPair& pair, const ComplexMatrix& w, int n,
                            const Polynomial& f) {
    if (n < 1)
        throw std::invalid_argument("averaged_functional: order must be >= 1");
    if (w.dim() != pair.dim())
        throw std::invalid_argument("averaged_functional: dimension mismatch");
    if (f.degree() < n)
        return 0.0; // functional vanishes on polynomials with f^{(n)} = 0

    const Polynomial fp = f.derivative();
    const int points = (f.degree() + 1) / 2 + 1;
    const deriv::QuadratureRule rule = deriv::gauss_legendre_01(points);
    double fact = 1.0;
    for (int i = 2; i < n; ++i)
        fact *= i;

    Complex acc = 0.0;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
        const double t = rule.nodes[q];
        const double weight = rule.weights[q] * std::pow(1.0 - t, n - 1) / fact;
        acc += weight * (deriv::derivative_poly_path(pair, fp, n - 1, t) * w).trace();
    }
    return acc;
}

} // namespace opshift::ssf
