#pragma once

#include <vector>

#include "opshift/complex_matrix.hpp"

namespace opshift::numlin {

/// Eigenvalues of a Hermitian matrix, sorted descending. Cyclic Jacobi with
/// complex rotations; sweeps run until the off-diagonal Frobenius mass drops
/// below 1e-13 of its initial value. Rejects inputs that are not Hermitian
/// within 1e-10 (relative to the largest entry).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h);

/// Singular values, descending: square roots of the Jacobi eigenvalues of
/// x^H x with round-off negatives clamped at zero.
std::vector<double> singular_values(const ComplexMatrix& x);

/// Schatten p-norm, p in [1, inf]. p = infinity gives the operator norm.
double schatten_norm(const ComplexMatrix& x, double p);

double operator_norm(const ComplexMatrix& x);
double trace_norm(const ComplexMatrix& x);

} // namespace opshift::numlin
