#include "opshift/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "opshift/schatten.hpp"

namespace opshift::numlin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double principal_arg(Complex z) {
    double a = std::arg(z);
    if (a < 0.0)
        a += kTwoPi;
    if (a >= kTwoPi)
        a -= kTwoPi;
    return a;
}

// Modified Gram-Schmidt with one reorthogonalization pass.
// Returns the orthonormal columns extracted from `cols` (rank many).
std::vector<std::vector<Complex>> orthonormal_range(const ComplexMatrix& p, int rank) {
    const int d = p.dim();
    std::vector<std::vector<Complex>> basis;
    for (int c = 0; c < d && static_cast<int>(basis.size()) < rank; ++c) {
        std::vector<Complex> v(d);
        for (int r = 0; r < d; ++r)
            v[r] = p(r, c);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                Complex overlap = 0.0;
                for (int r = 0; r < d; ++r)
                    overlap += std::conj(b[r]) * v[r];
                for (int r = 0; r < d; ++r)
                    v[r] -= overlap * b[r];
            }
        }
        double nrm = 0.0;
        for (const auto& x : v)
            nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (nrm > 1e-6) {
            for (auto& x : v)
                x /= nrm;
            basis.push_back(std::move(v));
        }
    }
    if (static_cast<int>(basis.size()) != rank)
        throw std::runtime_error("spectral projection range extraction failed (rank mismatch)");
    return basis;
}

} // namespace

SpectralUnitary SpectralUnitary::from_projections(const std::vector<Complex>& eigenvalues,
                                                  const std::vector<ComplexMatrix>& projections) {
    if (eigenvalues.size() != projections.size() || eigenvalues.empty())
        throw std::invalid_argument("from_projections: need matching nonempty eigenvalue/projection lists");
    const int d = projections.front().dim();

    std::vector<int> order(eigenvalues.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return principal_arg(eigenvalues[a]) < principal_arg(eigenvalues[b]);
    });

    SpectralUnitary su;
    su.basis_ = ComplexMatrix(d);
    int offset = 0;
    for (int idx : order) {
        const ComplexMatrix& p = projections[idx];
        if (p.dim() != d)
            throw std::invalid_argument("from_projections: projection dimension mismatch");
        const int rank = static_cast<int>(std::llround(p.trace().real()));
        if (rank < 0 || offset + rank > d)
            throw std::runtime_error("from_projections: projection ranks exceed dimension");
        if (rank == 0)
            continue;
        auto cols = orthonormal_range(p, rank);
        // Reconstruction check: anything that is not a Hermitian idempotent
        // of the inferred rank fails here.
        ComplexMatrix rebuilt(d);
        for (int c = 0; c < rank; ++c)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    rebuilt(i, j) += cols[c][i] * std::conj(cols[c][j]);
        if ((rebuilt - p).max_abs() > 1e-8)
            throw std::runtime_error("from_projections: input is not an orthogonal projection");
        for (int c = 0; c < rank; ++c)
            for (int r = 0; r < d; ++r)
                su.basis_(r, offset + c) = cols[c][r];
        su.groups_.push_back({eigenvalues[idx], offset, rank});
        offset += rank;
    }
    if (offset != d)
        throw std::runtime_error("from_projections: projections do not resolve the identity");
    su.validate();
    return su;
}

SpectralUnitary SpectralUnitary::from_eigenbasis(const std::vector<Complex>& eigenvalues,
                                                 ComplexMatrix basis) {
    const int d = basis.dim();
    if (static_cast<int>(eigenvalues.size()) != d)
        throw std::invalid_argument("from_eigenbasis: need one eigenvalue per column");

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return principal_arg(eigenvalues[a]) < principal_arg(eigenvalues[b]);
    });

    SpectralUnitary su;
    su.basis_ = ComplexMatrix(d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r)
            su.basis_(r, c) = basis(r, order[c]);

    for (int c = 0; c < d; ++c) {
        const Complex z = eigenvalues[order[c]];
        if (!su.groups_.empty() && std::abs(su.groups_.back().eigenvalue - z) <= 1e-12) {
            su.groups_.back().rank += 1;
        } else {
            su.groups_.push_back({z, c, 1});
        }
    }
    su.validate();
    return su;
}

ComplexMatrix SpectralUnitary::projection(int g) const {
    const Group& grp = groups_.at(g);
    const int d = dim();
    ComplexMatrix p(d);
    for (int c = grp.offset; c < grp.offset + grp.rank; ++c)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                p(i, j) += basis_(i, c) * std::conj(basis_(j, c));
    return p;
}

ComplexMatrix SpectralUnitary::to_matrix() const {
    return power(1);
}

ComplexMatrix SpectralUnitary::power(int k) const {
    const int d = dim();
    ComplexMatrix diag(d);
    for (const Group& g : groups_) {
        const Complex zk = std::pow(g.eigenvalue, k);
        for (int c = g.offset; c < g.offset + g.rank; ++c)
            diag(c, c) = zk;
    }
    return from_basis(diag);
}

ComplexMatrix SpectralUnitary::to_basis(const ComplexMatrix& x) const {
    return adjoint_multiply(basis_, x * basis_);
}

ComplexMatrix SpectralUnitary::from_basis(const ComplexMatrix& y) const {
    return multiply_adjoint(basis_ * y, basis_);
}

bool SpectralUnitary::arg_sorted() const {
    for (size_t g = 1; g < groups_.size(); ++g)
        if (principal_arg(groups_[g - 1].eigenvalue) >= principal_arg(groups_[g].eigenvalue))
            return false;
    return true;
}

void SpectralUnitary::validate() const {
    const int d = dim();
    if (d == 0 || groups_.empty())
        throw std::runtime_error("SpectralUnitary: empty spectral data");
    int total = 0;
    for (const Group& g : groups_) {
        if (std::abs(std::abs(g.eigenvalue) - 1.0) > 1e-12)
            throw std::runtime_error("SpectralUnitary: eigenvalue is not unimodular");
        if (g.rank <= 0 || g.offset != total)
            throw std::runtime_error("SpectralUnitary: inconsistent group layout");
        total += g.rank;
    }
    if (total != d)
        throw std::runtime_error("SpectralUnitary: group ranks do not sum to the dimension");

    ComplexMatrix gram = adjoint_multiply(basis_, basis_);
    ComplexMatrix eye = ComplexMatrix::identity(d);
    if ((gram - eye).max_abs() > 1e-10)
        throw std::runtime_error("SpectralUnitary: basis is not orthonormal within 1e-10");
}

SpectralUnitary random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1)
        throw std::invalid_argument("random_unitary: dim must be >= 1");
    SplitRng rng(seed, "random_unitary");
    ComplexMatrix g = random_gaussian_matrix(dim, rng);

    // Gram-Schmidt QR of the Gaussian sample; two passes keep Q orthonormal
    // to machine precision at these sizes.
    ComplexMatrix q(dim);
    for (int c = 0; c < dim; ++c) {
        std::vector<Complex> v(dim);
        for (int r = 0; r < dim; ++r)
            v[r] = g(r, c);
        for (int pass = 0; pass < 2; ++pass)
            for (int b = 0; b < c; ++b) {
                Complex overlap = 0.0;
                for (int r = 0; r < dim; ++r)
                    overlap += std::conj(q(r, b)) * v[r];
                for (int r = 0; r < dim; ++r)
                    v[r] -= overlap * q(r, b);
            }
        double nrm = 0.0;
        for (const auto& x : v)
            nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) // Gaussian sample degenerate; practically unreachable
            throw std::runtime_error("random_unitary: QR breakdown");
        for (int r = 0; r < dim; ++r)
            q(r, c) = v[r] / nrm;
    }

    std::vector<Complex> eigenvalues(dim);
    for (int j = 0; j < dim; ++j) {
        const double theta = rng.uniform(0.0, kTwoPi);
        eigenvalues[j] = std::polar(1.0, theta);
    }
    return SpectralUnitary::from_eigenbasis(eigenvalues, q);
}

SpectralUnitary discretize_unitary(const SpectralUnitary& u, int grid_size) {
    if (grid_size < 1)
        throw std::invalid_argument("discretize_unitary: grid size must be >= 1");
    const int n = grid_size;
    std::vector<Complex> eigenvalues;
    eigenvalues.reserve(u.dim());
    for (const auto& g : u.groups()) {
        const double phi = principal_arg(g.eigenvalue) / kTwoPi; // in [0,1)
        // Snap values sitting within round-off below a grid point.
        int j = static_cast<int>(std::floor(n * phi + 1e-9)) % n;
        const Complex z = std::polar(1.0, kTwoPi * j / n);
        eigenvalues.insert(eigenvalues.end(), static_cast<size_t>(g.rank), z);
    }
    return SpectralUnitary::from_eigenbasis(eigenvalues, u.basis());
}

ContractionPair::ContractionPair(ComplexMatrix u0_, ComplexMatrix v_)
    : u0(std::move(u0_)), v(std::move(v_)) {
    if (u0.dim() != v.dim())
        throw std::invalid_argument("ContractionPair: dimension mismatch");
    if (!u0.all_finite() || !v.all_finite())
        throw std::invalid_argument("ContractionPair: non-finite entries");
    if (operator_norm(u0) > 1.0 + 1e-10)
        throw std::invalid_argument("ContractionPair: u0 is not a contraction");
    if (operator_norm(u0 + v) > 1.0 + 1e-10)
        throw std::invalid_argument("ContractionPair: u0 + v is not a contraction");
}

ComplexMatrix ContractionPair::at(double t) const {
    return u0 + v * Complex(t);
}

namespace {

ComplexMatrix random_contraction(int dim, SplitRng& rng, double radius) {
    ComplexMatrix m = random_gaussian_matrix(dim, rng);
    const double nrm = operator_norm(m);
    if (nrm > 0.0)
        m *= Complex(radius / nrm);
    return m;
}

} // namespace

ContractionPair random_contraction_pair(int dim, std::uint64_t seed, double schatten_p,
                                        double target_norm, const ContractionPairOptions& opts) {
    if (dim < 1)
        throw std::invalid_argument("random_contraction_pair: dim must be >= 1");
    if (!(target_norm > 0.0))
        throw std::invalid_argument("random_contraction_pair: target norm must be positive");

    SplitRng rng(seed, "contraction_pair");
    ComplexMatrix u0 = opts.unitary_u0 ? random_unitary(dim, rng.next_u64()).to_matrix()
                                       : random_contraction(dim, rng, opts.contraction_radius);
    SplitRng rng1 = rng.split("endpoint");
    ComplexMatrix u1 = random_contraction(dim, rng1, opts.contraction_radius);

    ComplexMatrix v = u1 - u0;
    const double vnorm = schatten_norm(v, schatten_p);
    if (vnorm <= 0.0)
        throw std::runtime_error("random_contraction_pair: degenerate direction");

    const double s = target_norm / vnorm;
    ComplexMatrix scaled = v * Complex(s);
    if (s <= 1.0 || operator_norm(u0 + scaled) <= 1.0 + 1e-10)
        return ContractionPair(u0, scaled);

    // s > 1 leaves the convex hull of the two contractions; find the largest
    // feasible stretch by bisection (the feasible set in s is an interval).
    double lo = 1.0, hi = s;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (operator_norm(u0 + v * Complex(mid)) <= 1.0 + 1e-12)
            lo = mid;
        else
            hi = mid;
    }
    std::ostringstream msg;
    msg << "random_contraction_pair: target ||v||_p = " << target_norm
        << " infeasible; largest feasible norm is " << lo * vnorm;
    throw std::invalid_argument(msg.str());
}

UnitaryPair random_unitary_pair(int dim, std::uint64_t seed, double schatten_p,
                                double target_norm) {
    SplitRng rng(seed, "unitary_pair");
    SpectralUnitary u0 = random_unitary(dim, rng.next_u64());
    ComplexMatrix u0m = u0.to_matrix();

    SplitRng rng1 = rng.split("endpoint");
    ComplexMatrix u1 = random_contraction(dim, rng1, 0.95);
    ComplexMatrix v = u1 - u0m;
    const double vnorm = schatten_norm(v, schatten_p);
    double s = target_norm / vnorm;
    if (s > 1.0) {
        double lo = 1.0, hi = s;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (operator_norm(u0m + v * Complex(mid)) <= 1.0 + 1e-12)
                lo = mid;
            else
                hi = mid;
        }
        std::ostringstream msg;
        msg << "random_unitary_pair: target ||v||_p = " << target_norm
            << " infeasible; largest feasible norm is " << lo * vnorm;
        throw std::invalid_argument(msg.str());
    }
    return {std::move(u0), ContractionPair(u0m, v * Complex(s))};
}

} // namespace opshift::numlin
