#pragma once

#include <span>
#include <vector>

#include "opshift/moi.hpp"
#include "opshift/polynomial.hpp"
#include "opshift/spectral.hpp"

namespace opshift::deriv {

using numlin::Complex;
using numlin::ComplexMatrix;
using numlin::ContractionPair;
using numlin::SpectralUnitary;
using poly::Polynomial;

/// d^n/dt^n f(u0 + t v) at t0 via the matrix-coefficient expansion of the
/// path: U_t^k = sum_j t^j C_{k,j} with C_{k,j} = C_{k-1,j} U0 + C_{k-1,j-1} V.
/// n = 0 returns f(U_{t0}); t0 must lie in [0, 1].
ComplexMatrix derivative_poly_path(const ContractionPair& pair, const Polynomial& f, int n,
                                   double t0);

/// Same derivative at t = 0 through the operator-integral route:
/// n! T_{f^[n]}(v, ..., v) over the spectral measure of the unitary u0.
ComplexMatrix derivative_moi(const SpectralUnitary& u0, const ComplexMatrix& v,
                             const Polynomial& f, int n);

/// |tr(d^n/dt^n f(U_t)) - tr(d^{n-1}/dt^{n-1} f'(U_t) v)| at t0.
double trace_identity_check(const ContractionPair& pair, const Polynomial& f, int n, double t0);

/// f(u0 + v) minus the first n Taylor terms of t -> f(u0 + t v) at 0.
ComplexMatrix taylor_remainder(const ContractionPair& pair, const Polynomial& f, int n);

/// (1/(n-1)!) int_0^1 (1-t)^{n-1} d^n/dt^n f(U_t) dt, Gauss-Legendre with
/// ceil(deg f / 2) + 1 nodes (exact: the integrand is polynomial in t).
ComplexMatrix remainder_via_integral(const ContractionPair& pair, const Polynomial& f, int n);

struct QuadratureRule {
    std::vector<double> nodes;   // in (0, 1)
    std::vector<double> weights; // sum to 1
};

/// Gauss-Legendre rule mapped to [0, 1]; exact for degree <= 2*points - 1.
QuadratureRule gauss_legendre_01(int points);

} // namespace opshift::deriv
