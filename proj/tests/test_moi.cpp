#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "opshift/moi.hpp"
#include "opshift/schatten.hpp"
#include "oracles.hpp"

using namespace opshift::moi;
using opshift::numlin::Complex;
using opshift::numlin::ComplexMatrix;
using opshift::numlin::SpectralUnitary;
using opshift::numlin::SplitRng;
using opshift::poly::Polynomial;

namespace {

std::vector<ComplexMatrix> random_args(int count, int dim, SplitRng& rng) {
    std::vector<ComplexMatrix> xs;
    for (int i = 0; i < count; ++i) {
        ComplexMatrix x = opshift::numlin::random_gaussian_matrix(dim, rng);
        x *= Complex(1.0 / std::max(1.0, opshift::numlin::operator_norm(x)));
        xs.push_back(std::move(x));
    }
    return xs;
}

} // namespace

TEST_CASE("constant symbol collapses to the plain product") {
    SplitRng rng(2, "collapse");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 11);
    for (int n : {1, 2, 3}) {
        const auto xs = random_args(n, 6, rng);
        ComplexMatrix expect = xs[0];
        for (int i = 1; i < n; ++i)
            expect = expect * xs[i];
        const ComplexMatrix got =
            moi_apply(spec, MoiSymbol::constant(n + 1, 1.0), Region::full(n + 1), xs);
        CHECK(opshift::numlin::operator_norm(got - expect) < 1e-11);
    }
}

TEST_CASE("first divided difference of the identity polynomial is the identity map") {
    SplitRng rng(3, "identity_map");
    const SpectralUnitary spec = opshift::numlin::random_unitary(5, 12);
    const auto xs = random_args(1, 5, rng);
    const ComplexMatrix got = moi_apply(
        spec, MoiSymbol::divided_difference(Polynomial::monomial(1), 1), Region::full(2), xs);
    CHECK(opshift::numlin::operator_norm(got - xs[0]) < 1e-12);
}

TEST_CASE("fast path agrees with the naive projection-product sum") {
    SplitRng rng(5, "naive");
    for (int n : {1, 2, 3}) {
        const SpectralUnitary spec = opshift::numlin::random_unitary(6, 100 + n);
        const auto xs = random_args(n, 6, rng);
        const Polynomial f = opshift::poly::random_polynomial(n, 7, rng);
        const MoiSymbol sym = MoiSymbol::divided_difference(f, n);
        for (const Region& region :
             {Region::full(n + 1), Region::diagonal(n + 1), Region::order(n + 1, "j0<=j1")}) {
            const ComplexMatrix fast = moi_apply(spec, sym, region, xs);
            const ComplexMatrix naive = oracles::naive_moi(spec, sym, region, xs);
            CHECK(opshift::numlin::operator_norm(fast - naive) < 1e-10);
        }
    }
}

TEST_CASE("fast path handles rank > 1 groups (discretized spectrum)") {
    SplitRng rng(7, "multiplicity");
    const SpectralUnitary fine = opshift::numlin::random_unitary(8, 19);
    const SpectralUnitary coarse = opshift::numlin::discretize_unitary(fine, 4);
    REQUIRE(coarse.group_count() < 8); // merged groups exist
    const auto xs = random_args(2, 8, rng);
    const Polynomial f = opshift::poly::random_polynomial(2, 6, rng);
    const MoiSymbol sym = MoiSymbol::divided_difference(f, 2);
    const ComplexMatrix fast = moi_apply(coarse, sym, Region::full(3), xs);
    const ComplexMatrix naive = oracles::naive_moi(coarse, sym, Region::full(3), xs);
    CHECK(opshift::numlin::operator_norm(fast - naive) < 1e-10);
}

TEST_CASE("moi_apply is linear in every slot") {
    SplitRng rng(9, "linear");
    const SpectralUnitary spec = opshift::numlin::random_unitary(5, 23);
    const int n = 3;
    const Polynomial f = opshift::poly::random_polynomial(n, 8, rng);
    const MoiSymbol sym = MoiSymbol::divided_difference(f, n);
    const Region full = Region::full(n + 1);
    auto xs = random_args(n, 5, rng);
    for (int slot = 0; slot < n; ++slot) {
        auto xs_a = xs, xs_b = xs, xs_c = xs;
        const ComplexMatrix y = opshift::numlin::random_gaussian_matrix(5, rng);
        const Complex scale(0.7, -0.4);
        xs_b[slot] = y;
        xs_c[slot] = xs[slot] * scale + y;
        const ComplexMatrix lhs = moi_apply(spec, sym, full, xs_c);
        const ComplexMatrix rhs =
            moi_apply(spec, sym, full, xs_a) * scale + moi_apply(spec, sym, full, xs_b);
        CHECK(opshift::numlin::operator_norm(lhs - rhs) < 1e-11);
    }
}

TEST_CASE("region additivity") {
    SplitRng rng(11, "additivity");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 31);
    const int n = 2;
    const auto xs = random_args(n, 6, rng);
    const Polynomial f = opshift::poly::random_polynomial(n, 6, rng);
    const MoiSymbol sym = MoiSymbol::divided_difference(f, n);

    // Diagonal vs off-diagonal partitions the full region.
    const Region diag = Region::diagonal(n + 1);
    const Region offdiag = Region::custom(n + 1, [](std::span<const int> idx,
                                                    const SpectralUnitary&) {
        for (size_t i = 1; i < idx.size(); ++i)
            if (idx[i] != idx[0])
                return true;
        return false;
    });
    CHECK(region_additivity_check(spec, sym, diag, offdiag, xs) < 1e-11);
    const ComplexMatrix via_split = moi_apply(spec, sym, Region::union_of({diag, offdiag}), xs);
    const ComplexMatrix via_full = moi_apply(spec, sym, Region::full(n + 1), xs);
    CHECK(opshift::numlin::operator_norm(via_split - via_full) < 1e-12);

    // Empty complement.
    const Region empty = Region::custom(
        n + 1, [](std::span<const int>, const SpectralUnitary&) { return false; });
    CHECK(region_additivity_check(spec, sym, Region::full(n + 1), empty, xs) < 1e-14);

    // Random half/half split.
    const Region half_a = Region::custom(n + 1, [](std::span<const int> idx,
                                                   const SpectralUnitary&) {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int j : idx)
            h = h * 1099511628211ULL + j;
        return (h >> 5 & 1) == 0;
    });
    const Region half_b = Region::custom(n + 1, [](std::span<const int> idx,
                                                   const SpectralUnitary&) {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int j : idx)
            h = h * 1099511628211ULL + j;
        return (h >> 5 & 1) == 1;
    });
    CHECK(region_additivity_check(spec, sym, half_a, half_b, xs) < 1e-11);

    // Overlap rejected.
    CHECK_THROWS_AS(region_additivity_check(spec, sym, diag, Region::full(n + 1), xs),
                    std::invalid_argument);
}

TEST_CASE("adjoint identity") {
    SplitRng rng(13, "adjoint");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 37);

    // n = 1 with a real symmetric symbol and Hermitian argument.
    {
        ComplexMatrix g = opshift::numlin::random_gaussian_matrix(6, rng);
        ComplexMatrix h = g + g.adjoint();
        const Polynomial f({0.0, 0.0, 1.0}); // z^2, real coefficients
        std::vector<ComplexMatrix> xs{h};
        CHECK(adjoint_identity_check(spec, MoiSymbol::divided_difference(f, 1), Region::full(2),
                                     xs) < 1e-11);
    }

    // Constant symbol reduces to (x1 x2 x3)^H = x3^H x2^H x1^H.
    {
        const auto xs = random_args(3, 6, rng);
        CHECK(adjoint_identity_check(spec, MoiSymbol::constant(4, 1.0), Region::full(4), xs) <
              1e-11);
    }

    // Random order-3 instance with an order-constrained region.
    {
        const auto xs = random_args(3, 6, rng);
        const Polynomial f = opshift::poly::random_polynomial(3, 8, rng);
        CHECK(adjoint_identity_check(spec, MoiSymbol::divided_difference(f, 3),
                                     Region::order(4, "j0<=j2<j1"), xs) < 1e-10);
    }
}

TEST_CASE("trace duality identity") {
    SplitRng rng(17, "duality");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 41);

    {
        const auto xs = random_args(1, 6, rng);
        const auto x0 = random_args(1, 6, rng);
        CHECK(duality_identity_check(spec, MoiSymbol::constant(2, 1.0), Region::full(2), x0[0],
                                     xs) < 1e-12);
    }
    for (int n : {2, 3}) {
        const auto xs = random_args(n, 6, rng);
        const auto x0 = random_args(1, 6, rng);
        const Polynomial f = opshift::poly::random_polynomial(n, 7, rng);
        const MoiSymbol sym = MoiSymbol::divided_difference(f, n);
        CHECK(duality_identity_check(spec, sym, Region::full(n + 1), x0[0], xs) < 1e-10);
        CHECK(duality_identity_check(spec, sym, Region::diagonal(n + 1), x0[0], xs) < 1e-10);
        CHECK(duality_identity_check(spec, sym, Region::order(n + 1, "j0<=j1"), x0[0], xs) <
              1e-10);
    }
}

TEST_CASE("product and composition identities") {
    SplitRng rng(19, "product");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 43);
    const int n = 3;
    const auto xs = random_args(n, 6, rng);
    const Polynomial g = opshift::poly::random_polynomial(3, 7, rng);

    // Constant symbols: associativity of the plain product.
    CHECK(product_identity_check(spec, MoiSymbol::constant(2, 1.0), Region::full(2),
                                 MoiSymbol::constant(3, 1.0), Region::full(3), xs) < 1e-11);

    for (int k : {1, 2}) {
        const MoiSymbol s1 = MoiSymbol::divided_difference(g, k);
        const MoiSymbol s2 = MoiSymbol::divided_difference(g, n - k);
        CHECK(product_identity_check(spec, s1, Region::full(k + 1), s2, Region::full(n - k + 1),
                                     xs) < 1e-10);
        const MoiSymbol s2c = MoiSymbol::divided_difference(g, n - k + 1);
        CHECK(composition_identity_check(spec, s1, Region::full(k + 1), s2c,
                                         Region::full(n - k + 2), xs) < 1e-10);
    }

    // Structured regions through the joins as well.
    const MoiSymbol s1 = MoiSymbol::divided_difference(g, 2);
    const MoiSymbol s2 = MoiSymbol::divided_difference(g, 1);
    CHECK(product_identity_check(spec, s1, Region::order(3, "j0<=j1"), s2,
                                 Region::diagonal(2), xs) < 1e-10);
    CHECK(composition_identity_check(spec, s1, Region::order(3, "j0<=j1"), s2, Region::full(2),
                                     std::span<const ComplexMatrix>(xs).subspan(0, 2)) < 1e-10);
}

TEST_CASE("triangular truncation") {
    SplitRng rng(23, "triangular");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 47);

    // Diagonal input has no strict upper part.
    ComplexMatrix d = spec.to_matrix();
    CHECK(opshift::numlin::operator_norm(
              triangular_truncation(spec, d, TruncationMode::strict_upper)) < 1e-10);

    // Rank-1 projections and the ones matrix: the literal strict triangle in
    // the eigenbasis.
    ComplexMatrix ones_basis(6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            ones_basis(i, j) = 1.0;
    const ComplexMatrix x = spec.from_basis(ones_basis);
    const ComplexMatrix up = spec.to_basis(triangular_truncation(spec, x, TruncationMode::strict_upper));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(up(i, j) - (i < j ? 1.0 : 0.0)) < 1e-11);

    // The three parts sum back to x.
    const ComplexMatrix y = opshift::numlin::random_gaussian_matrix(6, rng);
    const ComplexMatrix sum = triangular_truncation(spec, y, TruncationMode::strict_upper) +
                              triangular_truncation(spec, y, TruncationMode::strict_lower) +
                              triangular_truncation(spec, y, TruncationMode::diagonal);
    CHECK((sum - y).max_abs() < 1e-13);
}

TEST_CASE("phase and modulus block transforms") {
    SplitRng rng(29, "transforms");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 53);
    const int g = spec.group_count();
    std::vector<int> rows, cols;
    for (int i = 0; i < g; ++i)
        (i % 2 == 0 ? rows : cols).push_back(i);
    const ComplexMatrix x = opshift::numlin::random_gaussian_matrix(6, rng);

    // m = 0 / s = 0 reduce to the block compression.
    const ComplexMatrix compress =
        upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_plus, 0, rows, cols);
    const ComplexMatrix gamma0 = upsilon_gamma_transform(spec, x, BlockWeightKind::gamma, 0.0, rows, cols);
    CHECK((compress - gamma0).max_abs() < 1e-12);
    ComplexMatrix pb(6), pc(6);
    for (int i : rows)
        pb += spec.projection(i);
    for (int j : cols)
        pc += spec.projection(j);
    CHECK(opshift::numlin::operator_norm(compress - pb * x * pc) < 1e-11);

    // 1x1 blocks against the scalar formula.
    const ComplexMatrix xt = spec.to_basis(x);
    const ComplexMatrix gs = spec.to_basis(
        upsilon_gamma_transform(spec, x, BlockWeightKind::gamma, 1.7, rows, cols));
    for (int i : rows)
        for (int j : cols) {
            const double ad = std::abs(spec.eigenvalue(i) - spec.eigenvalue(j));
            const Complex w = ad <= 1e-14 ? Complex(0.0) : std::polar(1.0, 1.7 * std::log(ad));
            CHECK(std::abs(gs(i, j) - w * xt(i, j)) < 1e-12);
        }

    // Unimodular phases: Frobenius norm preserved on the acted block.
    const ComplexMatrix u1 = upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_plus, 1, rows, cols);
    double acted = 0.0;
    for (int i : rows)
        for (int j : cols)
            if (std::abs(spec.eigenvalue(i) - spec.eigenvalue(j)) > 1e-14)
                acted += std::norm(xt(i, j));
    CHECK(u1.frobenius_norm() == doctest::Approx(std::sqrt(acted)).epsilon(1e-11));

    // Reciprocal phases are conjugate phases.
    const ComplexMatrix um =
        upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_minus, 2, rows, cols);
    const ComplexMatrix umt = spec.to_basis(um);
    for (int i : rows)
        for (int j : cols) {
            const Complex diff = spec.eigenvalue(i) - spec.eigenvalue(j);
            if (std::abs(diff) <= 1e-14)
                continue;
            const Complex w = std::pow(std::conj(diff / std::abs(diff)), 2);
            CHECK(std::abs(umt(i, j) - w * xt(i, j)) < 1e-12);
        }

    CHECK_THROWS_AS(
        upsilon_gamma_transform(spec, x, BlockWeightKind::upsilon_plus, -1, rows, cols),
        std::invalid_argument);
}

TEST_CASE("diagonal operator integral") {
    SplitRng rng(31, "diagonal_moi");
    const SpectralUnitary fine = opshift::numlin::random_unitary(6, 59);

    // n = 1, constant symbol: the diagonal part of x.
    const auto xs1 = random_args(1, 6, rng);
    const ComplexMatrix d1 = diagonal_moi(fine, MoiSymbol::constant(2, 1.0), xs1);
    const ComplexMatrix want = triangular_truncation(fine, xs1[0], TruncationMode::diagonal);
    CHECK(opshift::numlin::operator_norm(d1 - want) < 1e-12);

    // Delta_1 equals the composed diagonal compressions.
    const auto xs = random_args(2, 6, rng);
    const ComplexMatrix dd = diagonal_moi(fine, MoiSymbol::constant(3, 1.0), xs);
    const ComplexMatrix composed =
        triangular_truncation(fine, xs[0], TruncationMode::diagonal) *
        triangular_truncation(fine, xs[1], TruncationMode::diagonal);
    CHECK(opshift::numlin::operator_norm(dd - composed) < 1e-12);

    // Discrete average over the full N-grid (orthogonality makes it exact).
    const int grid = 6;
    const SpectralUnitary coarse = opshift::numlin::discretize_unitary(fine, grid);
    const ComplexMatrix dg = diagonal_moi(coarse, MoiSymbol::constant(3, 1.0), xs);
    const ComplexMatrix avg = oracles::discrete_average_diagonal(coarse, grid, xs);
    CHECK(opshift::numlin::operator_norm(dg - avg) < 1e-11);

    // phi(z,..,z) = z against direct summation; phi_{2,z,0,0}(z,z,z) = z/2.
    const MoiSymbol hz = MoiSymbol::phi({2, Polynomial::monomial(1), 0, 0});
    const ComplexMatrix dz = diagonal_moi(fine, hz, xs) * Complex(2.0);
    ComplexMatrix direct(6);
    for (int gi = 0; gi < fine.group_count(); ++gi) {
        const ComplexMatrix p = fine.projection(gi);
        direct += p * xs[0] * p * xs[1] * p * fine.eigenvalue(gi);
    }
    CHECK(opshift::numlin::operator_norm(dz - direct) < 1e-11);
}

TEST_CASE("diagonal bound: contraction in mixed Schatten norms") {
    SplitRng rng(37, "diag_bound");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 61);
    for (int t = 0; t < 10; ++t) {
        const auto xs = random_args(2, 6, rng);
        const double a1 = 3.0, a2 = 6.0, a = 2.0; // 1/3 + 1/6 = 1/2
        const ComplexMatrix d = diagonal_moi(spec, MoiSymbol::constant(3, 1.0), xs);
        CHECK(opshift::numlin::schatten_norm(d, a) <=
              opshift::numlin::schatten_norm(xs[0], a1) *
                      opshift::numlin::schatten_norm(xs[1], a2) +
                  1e-9);
    }
}

TEST_CASE("symbol bounds are certified") {
    SplitRng rng(41, "bounds");
    const Polynomial f = opshift::poly::random_polynomial(3, 8, rng);
    std::vector<MoiSymbol> syms;
    syms.push_back(MoiSymbol::divided_difference(f, 2));
    syms.push_back(MoiSymbol::phi({2, f, 1, 1}));
    syms.push_back(MoiSymbol::phase_power(3, 2));
    syms.push_back(MoiSymbol::modulus_power(3, 1.3));
    syms.push_back(MoiSymbol::product({MoiSymbol::phase_power(3, 1), MoiSymbol::modulus_power(3, 0.5)}));
    for (const MoiSymbol& s : syms) {
        const double b = s.bound();
        for (int t = 0; t < 40; ++t) {
            std::vector<Complex> z;
            for (int i = 0; i < s.arity(); ++i)
                z.push_back(std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
            CHECK(std::abs(s.eval(z)) <= b + 1e-9);
        }
    }
}

TEST_CASE("budget guards") {
    SplitRng rng(43, "budget");
    const SpectralUnitary big = opshift::numlin::random_unitary(40, 71);
    const auto xs = random_args(4, 40, rng);
    const Polynomial f = opshift::poly::random_polynomial(4, 5, rng);
    // n = 4 caps the group count at 32.
    CHECK_THROWS_AS(moi_apply(big, MoiSymbol::divided_difference(f, 4), Region::full(5), xs),
                    std::runtime_error);
    // Arity/dimension mismatches are invalid arguments.
    const SpectralUnitary small = opshift::numlin::random_unitary(4, 73);
    CHECK_THROWS_AS(
        moi_apply(small, MoiSymbol::divided_difference(f, 4), Region::full(5), xs),
        std::invalid_argument);

    // A symbol evaluating to a non-finite value is reported.
    SplitRng rng2(44, "nonfinite");
    const auto xs1 = random_args(1, 4, rng2);
    const MoiSymbol blowup =
        MoiSymbol::constant(2, Complex(std::numeric_limits<double>::infinity(), 0.0));
    CHECK_THROWS_AS(moi_apply(small, blowup, Region::full(2), xs1), std::runtime_error);
}

TEST_CASE("additivity over the symbol") {
    SplitRng rng(53, "symbol_add");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 89);
    const int n = 2;
    const auto xs = random_args(n, 6, rng);
    const Polynomial f = opshift::poly::random_polynomial(n, 6, rng);
    const Polynomial g = opshift::poly::random_polynomial(n, 7, rng);
    const MoiSymbol a = MoiSymbol::divided_difference(f, n);
    const MoiSymbol b = MoiSymbol::divided_difference(g, n);
    for (const Region& region : {Region::full(n + 1), Region::order(n + 1, "j0<=j2<j1")}) {
        const ComplexMatrix joint = moi_apply(spec, MoiSymbol::sum({a, b}), region, xs);
        const ComplexMatrix split = moi_apply(spec, a, region, xs) + moi_apply(spec, b, region, xs);
        CHECK(opshift::numlin::operator_norm(joint - split) < 1e-11);
    }
}

TEST_CASE("region and symbol name grammar") {
    SplitRng rng(47, "grammar");
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 83);
    const auto xs = random_args(1, 6, rng);

    // Named regions behave like their factory counterparts.
    const int idx_pair[2] = {1, 4};
    CHECK(region_from_name(2, "full").contains(idx_pair, spec));
    CHECK_FALSE(region_from_name(2, "diagonal").contains(idx_pair, spec));
    CHECK(region_from_name(2, "order:j0<j1").contains(idx_pair, spec));
    const Region arcs = region_from_name(2, "arcs:0,1@2");
    const int lo_hi[2] = {0, spec.group_count() - 1};
    CHECK(arcs.contains(lo_hi, spec)); // first group in arc 0, last in arc 1

    // Named symbols evaluate like their factory counterparts.
    const std::vector<Complex> z{spec.eigenvalue(0), spec.eigenvalue(3)};
    CHECK(std::abs(symbol_from_name(2, "const:2.5").eval(z) - Complex(2.5)) < 1e-15);
    const MoiSymbol named_dd = symbol_from_name(2, "divdiff:0,0,1"); // f = z^2
    CHECK(std::abs(named_dd.eval(z) - (z[0] + z[1])) < 1e-13);
    const MoiSymbol psi_gamma = symbol_from_name(2, "psi:2*gamma:1.5");
    const Complex want = MoiSymbol::phase_power(2, 2).eval(z) *
                         MoiSymbol::modulus_power(2, 1.5).eval(z);
    CHECK(std::abs(psi_gamma.eval(z) - want) < 1e-14);
    const MoiSymbol named_phi = symbol_from_name(3, "phi:2,1,0:1,1");
    CHECK(std::abs(named_phi.eval(std::vector<Complex>{z[0], z[1], z[0]}) -
                   opshift::poly::eval_phi({2, Polynomial({1.0, 1.0}), 1, 0},
                                           std::vector<Complex>{z[0], z[1], z[0]})) < 1e-14);

    // The named pair plugs straight into the engine.
    const ComplexMatrix via_names = moi_apply(spec, named_dd, region_from_name(2, "full"), xs);
    const ComplexMatrix via_types = moi_apply(
        spec, MoiSymbol::divided_difference(Polynomial::monomial(2), 1), Region::full(2), xs);
    CHECK(opshift::numlin::operator_norm(via_names - via_types) < 1e-13);

    // Inline-JSON coefficients (complex) match the CSV form.
    const MoiSymbol json_dd = symbol_from_name(2, "divdiff:[[0,0],[0,0],[1,0]]");
    CHECK(std::abs(json_dd.eval(z) - named_dd.eval(z)) < 1e-15);

    CHECK_THROWS_AS(region_from_name(2, "bogus"), std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_name(2, "bogus:1"), std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_name(2, "phi:3,0,0:1"), std::invalid_argument);
    CHECK_THROWS_AS(symbol_from_name(2, "divdiff:@missing_file.json"), std::invalid_argument);
}

TEST_CASE("multilinear norm estimation") {
    // Identity transform has norm exactly 1.
    auto identity = [](std::span<const ComplexMatrix> xs) { return xs[0]; };
    const double alphas2[1] = {2.0};
    const auto est = estimate_multilinear_norm(identity, alphas2, 6, 3, 5);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-10));

    // Block compression never exceeds 1.
    const SpectralUnitary spec = opshift::numlin::random_unitary(6, 79);
    std::vector<int> rows{0, 1, 2}, cols{3, 4, 5};
    auto compress = [&](std::span<const ComplexMatrix> xs) {
        return upsilon_gamma_transform(spec, xs[0], BlockWeightKind::upsilon_plus, 0, rows, cols);
    };
    const double alphas3[1] = {3.0};
    CHECK(estimate_multilinear_norm(compress, alphas3, 6, 4, 7).value <= 1.0 + 1e-9);

    // Schur-multiplier case: the S^2 norm is the max of |f^[1]| on the grid.
    SplitRng schur_rng(3, "schur");
    const Polynomial f = opshift::poly::random_polynomial(2, 6, schur_rng);
    const MoiSymbol dd = MoiSymbol::divided_difference(f, 1);
    auto schur = [&](std::span<const ComplexMatrix> xs) {
        return moi_apply(spec, dd, Region::full(2), xs);
    };
    double grid_max = 0.0;
    for (int i = 0; i < spec.group_count(); ++i)
        for (int j = 0; j < spec.group_count(); ++j) {
            const std::vector<Complex> z{spec.eigenvalue(i), spec.eigenvalue(j)};
            grid_max = std::max(grid_max, std::abs(dd.eval(z)));
        }
    const auto schur_est = estimate_multilinear_norm(schur, alphas2, 6, 2, 11);
    CHECK(schur_est.value == doctest::Approx(grid_max).epsilon(1e-6));

    // Monotone in trials for a fixed seed.
    auto wobble = [&](std::span<const ComplexMatrix> xs) {
        return moi_apply(spec, dd, Region::order(2, "j0<j1"), xs);
    };
    const double alphas4[1] = {4.0};
    double prev = 0.0;
    for (int trials : {1, 2, 4, 8}) {
        const double v = estimate_multilinear_norm(wobble, alphas4, 6, trials, 13).value;
        CHECK(v >= prev - 1e-15);
        prev = v;
    }

    // Exponent inconsistency rejected.
    const double bad[2] = {1.0, 1.0};
    CHECK_THROWS_AS(estimate_multilinear_norm(identity, bad, 4, 1, 1), std::invalid_argument);
}
