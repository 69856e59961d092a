#pragma once

#include <optional>
#include <vector>

#include "opshift/complex_matrix.hpp"

namespace opshift::numlin {

/// Unitary described by its spectral data: unit-circle eigenvalues grouped
/// with orthogonal spectral projections. Groups are kept sorted by principal
/// argument in [0, 2pi) so index-order regions and triangular truncations are
/// well defined. Internally the basis Q (columns spanning the projection
/// ranges, group by group) is kept alongside the projections; rotating into
/// that basis is what makes the operator-integral engine cheap.
class SpectralUnitary {
public:
    struct Group {
        Complex eigenvalue;
        int offset = 0; // first column of this group's block in the basis
        int rank = 0;
    };

    SpectralUnitary() = default;

    /// From explicit eigenvalues and orthogonal projections (ranks inferred).
    static SpectralUnitary from_projections(const std::vector<Complex>& eigenvalues,
                                            const std::vector<ComplexMatrix>& projections);

    /// From an orthonormal basis: column j of `basis` is an eigenvector for
    /// eigenvalues[j]; equal (within 1e-12) consecutive eigenvalues merge.
    static SpectralUnitary from_eigenbasis(const std::vector<Complex>& eigenvalues,
                                           ComplexMatrix basis);

    int dim() const { return basis_.dim(); }
    int group_count() const { return static_cast<int>(groups_.size()); }
    const std::vector<Group>& groups() const { return groups_; }
    Complex eigenvalue(int g) const { return groups_[g].eigenvalue; }
    const ComplexMatrix& basis() const { return basis_; }

    ComplexMatrix projection(int g) const;
    ComplexMatrix to_matrix() const;

    /// U^k assembled from the spectral data (exact powers of eigenvalues).
    ComplexMatrix power(int k) const;

    /// Rotate x into the eigenbasis: Q^H x Q.
    ComplexMatrix to_basis(const ComplexMatrix& x) const;
    /// Rotate back: Q y Q^H.
    ComplexMatrix from_basis(const ComplexMatrix& y) const;

    /// Check all type invariants; throws std::runtime_error on violation.
    void validate() const;

    /// True when groups are strictly ascending in principal argument.
    bool arg_sorted() const;

private:
    std::vector<Group> groups_;
    ComplexMatrix basis_;
};

/// Haar-ish random unitary with known spectral data: Q from the QR of a
/// seeded complex Gaussian matrix, eigenvalues uniform on the circle; rank-1
/// projections from the columns of Q. Deterministic given the seed.
SpectralUnitary random_unitary(int dim, std::uint64_t seed);

/// Spectral discretization onto the uniform N-point grid: each eigenvalue
/// e^{2 pi i phi} moves to e^{2 pi i j / N} with j = floor(N phi); groups
/// landing on the same grid point merge.
SpectralUnitary discretize_unitary(const SpectralUnitary& u, int grid_size);

/// A contraction u0 together with a perturbation v such that u0 + v is again
/// a contraction; the whole segment u0 + t v, t in [0,1], then consists of
/// contractions by convexity.
struct ContractionPair {
    ComplexMatrix u0;
    ComplexMatrix v;

    ContractionPair() = default;
    ContractionPair(ComplexMatrix u0_, ComplexMatrix v_);

    int dim() const { return u0.dim(); }
    ComplexMatrix at(double t) const; // u0 + t v
};

struct ContractionPairOptions {
    bool unitary_u0 = false;    // start the path at a random unitary
    double contraction_radius = 0.95; // operator-norm rescale target for random contractions
};

/// Draw a pair with ||v||_p equal to target_norm. v points from u0 toward an
/// independent random contraction, rescaled; infeasible targets throw with
/// the largest feasible norm in the message.
ContractionPair random_contraction_pair(int dim, std::uint64_t seed, double schatten_p,
                                        double target_norm,
                                        const ContractionPairOptions& opts = {});

/// Same draw with a unitary u0 whose spectral data is returned alongside.
struct UnitaryPair {
    SpectralUnitary u0_spectral;
    ContractionPair pair;
};
UnitaryPair random_unitary_pair(int dim, std::uint64_t seed, double schatten_p, double target_norm);

} // namespace opshift::numlin
