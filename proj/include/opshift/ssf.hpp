#pragma once

#include <span>
#include <vector>

#include "opshift/deriv.hpp"

namespace opshift::ssf {

using numlin::Complex;
using numlin::ComplexMatrix;
using numlin::ContractionPair;
using poly::Polynomial;

/// Truncated anti-analytic Fourier series: the canonical representative of
/// the order-n shift class. coeffs[j-1] holds the Fourier coefficient of
/// e^{-ij theta}, j = 1..K; the analytic part is fixed to zero.
struct SSFSeries {
    int order = 1;
    std::vector<Complex> coeffs;

    int truncation() const { return static_cast<int>(coeffs.size()); }
    Complex at_angle(double theta) const;
};

/// tr R_n(z^k) — the monomial remainder trace feeding the reconstruction.
Complex remainder_moment(const ContractionPair& pair, int n, int k);

/// Solve the pairing equations <(z^k)^{(n)}, eta> = tr R_n(z^k) for
/// k = n..n+K-1 under the contour pairing; closed form
/// c_{k-n+1} = (k-n)!/(2 pi i k!) tr R_n(z^k).
SSFSeries reconstruct_ssf(const ContractionPair& pair, int n, int K);

/// Contour pairing <phi, eta> = int_0^{2pi} phi(e^{i t}) eta(e^{i t})
/// i e^{i t} dt, computed in closed form from Fourier orthogonality and
/// cross-checked against a 2048-point trapezoid rule (spectrally exact
/// here); disagreement above 1e-9 throws a convention-fault error.
Complex pairing(const Polynomial& phi, const SSFSeries& s);

/// |tr R_n(f) - <f^{(n)}, eta_n>| with eta_n reconstructed at truncation K;
/// requires deg f <= K + n - 1 (the truncation must cover f).
double verify_trace_formula(const ContractionPair& pair, int n, const Polynomial& f, int K);

/// Arclength L^1 norm of the truncated representative on a dense grid.
double l1_estimate(const SSFSeries& s, int grid_points = 4096);

/// (1/(n-1)!) int_0^1 (1-t)^{n-1} tr(d^{n-1}/dt^{n-1} f'(U_t) w) dt,
/// exact Gauss-Legendre on the polynomial integrand.
Complex averaged_functional(const ContractionPair& pair, const ComplexMatrix& w, int n,
                            const Polynomial& f);

} // namespace opshift::ssf
