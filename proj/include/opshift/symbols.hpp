#pragma once

#include <span>

#include "opshift/multipoly.hpp"
#include "opshift/polynomial.hpp"

namespace opshift::poly {

/// The weighted simplex-integral symbol of order n >= 1:
///
///   order >= 2:  integral over 0 <= s <= t <= t_3 <= ... <= t_n <= 1 of
///                t^m s^k h(l_n + (l_{n-1}-l_n) t_n + ... + (l_1-l_2) t
///                          + (l_0-l_1) s)
///   order == 1:  integral_0^1 t^k h(l_1 + (l_0-l_1) t) dt   (m unused)
///
/// With m = k = 0 and h = f^(n) this is exactly the divided difference
/// f^[n]; evaluation is exact for polynomial h.
struct SymbolPhi {
    int order = 1;
    Polynomial h;
    int m = 0;
    int k = 0;
};

Complex eval_phi(const SymbolPhi& sym, std::span<const Complex> nodes);

/// The two-point symbol: integral_0^1 t^m h(lambda + (mu-lambda) t) dt.
Complex phi_hm(const Polynomial& h, int m, Complex lambda, Complex mu);

/// Residual of the three-term decomposition of phi_{h,m}(lambda, mu) through
/// an intermediate point xi; requires lambda != mu.
double check_base_decomp(const Polynomial& h, int m, Complex lambda, Complex xi, Complex mu);

enum class GreenKind { tmh, tkh };

/// Residual of the order-reduction identities for the two weighted triangle
/// integrals (weight t^{m-1} for tmh, weight s^{k-1} for tkh), with points on
/// the circle scaled by kappa inside the integrand as stated. Requires
/// lambda != mu (tmh) resp. lambda != xi (tkh).
double check_green_identity(GreenKind kind, const Polynomial& h, int mk, double kappa,
                            Complex lambda, Complex xi, Complex mu);

enum class TmkhPart { i, ii };

/// Residual of the order-(n) to order-(n-1) reduction for the weighted
/// symbols; part i reduces the t-weight (requires nodes[0] != nodes[1]),
/// part ii the s-weight (requires nodes[1] != nodes[2]).
double check_tmkh(TmkhPart part, int n, const Polynomial& h, int mk,
                  std::span<const Complex> nodes);

/// c_{n,m,k} with phi_{n,h,m-1,k-1}(l,...,l) = c_{n,m,k} h(l); m, k >= 1.
double diagonal_constant(int n, int m, int k);

} // namespace opshift::poly
