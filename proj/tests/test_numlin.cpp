#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "opshift/json_io.hpp"
#include "opshift/schatten.hpp"
#include "opshift/spectral.hpp"
#include "oracles.hpp"

using namespace opshift::numlin;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix diag(std::initializer_list<double> values) {
    ComplexMatrix m(static_cast<int>(values.size()));
    int i = 0;
    for (double v : values)
        m(i, i) = v, ++i;
    return m;
}
} // namespace

TEST_CASE("schatten norms on fixed matrices") {
    CHECK(schatten_norm(ComplexMatrix::identity(4), 2.0) == doctest::Approx(2.0).epsilon(1e-13));
    const ComplexMatrix d34 = diag({3.0, 4.0});
    CHECK(schatten_norm(d34, 1.0) == doctest::Approx(7.0).epsilon(1e-13));
    CHECK(schatten_norm(d34, kInf) == doctest::Approx(4.0).epsilon(1e-13));
    CHECK_THROWS_AS(schatten_norm(d34, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(schatten_norm(d34, -1.0), std::invalid_argument);
}

TEST_CASE("schatten norm vs closed-form 2x2 singular values") {
    SplitRng rng(7, "svd2x2");
    for (int t = 0; t < 50; ++t) {
        const ComplexMatrix x = random_gaussian_matrix(2, rng);
        const auto sv = oracles::singular_values_2x2(x);
        const auto got = singular_values(x);
        REQUIRE(got.size() == 2);
        CHECK(std::abs(got[0] - sv[0]) < 1e-12 * std::max(1.0, sv[0]));
        CHECK(std::abs(got[1] - sv[1]) < 1e-12 * std::max(1.0, sv[0]));
    }
}

TEST_CASE("hermitian eigenvalues: fixed and oracle cases") {
    const auto ev = hermitian_eigenvalues(diag({1.0, 2.0, 3.0}));
    CHECK(ev == std::vector<double>{3.0, 2.0, 1.0});

    ComplexMatrix pauli(2);
    pauli(0, 1) = 1.0;
    pauli(1, 0) = 1.0;
    const auto ev2 = hermitian_eigenvalues(pauli);
    CHECK(ev2[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(ev2[1] == doctest::Approx(-1.0).epsilon(1e-13));

    SplitRng rng(11, "herm3");
    for (int t = 0; t < 25; ++t) {
        ComplexMatrix g = random_gaussian_matrix(3, rng);
        ComplexMatrix h = g + g.adjoint();
        const auto got = hermitian_eigenvalues(h);
        const auto want = oracles::hermitian3_eigs(h);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(got[i] - want[i]) < 1e-10 * std::max(1.0, std::abs(want[0])));
    }
}

TEST_CASE("hermitian eigenvalues reject non-Hermitian input") {
    ComplexMatrix m(2);
    m(0, 1) = 1.0; // m(1,0) stays 0
    CHECK_THROWS_AS(hermitian_eigenvalues(m), std::invalid_argument);
}

TEST_CASE("random unitary basics") {
    const SpectralUnitary u1 = random_unitary(1, 5);
    CHECK(u1.group_count() == 1);
    CHECK(std::abs(std::abs(u1.eigenvalue(0)) - 1.0) < 1e-14);

    const SpectralUnitary a = random_unitary(8, 123);
    const SpectralUnitary b = random_unitary(8, 123);
    CHECK((a.to_matrix() - b.to_matrix()).max_abs() == 0.0); // determinism

    const ComplexMatrix u = a.to_matrix();
    CHECK(operator_norm(adjoint_multiply(u, u) - ComplexMatrix::identity(8)) < 1e-10);

    CHECK_THROWS_AS(random_unitary(0, 1), std::invalid_argument);
}

TEST_CASE("spectral data round trip through projections") {
    const SpectralUnitary a = random_unitary(6, 99);
    std::vector<Complex> eigenvalues;
    std::vector<ComplexMatrix> projections;
    for (int g = 0; g < a.group_count(); ++g) {
        eigenvalues.push_back(a.eigenvalue(g));
        projections.push_back(a.projection(g));
    }
    // Type invariants hold for the extracted data.
    ComplexMatrix sum(6);
    for (size_t i = 0; i < projections.size(); ++i) {
        const ComplexMatrix& p = projections[i];
        CHECK((p - p.adjoint()).max_abs() < 1e-10);
        CHECK((p * p - p).max_abs() < 1e-10);
        for (size_t j = i + 1; j < projections.size(); ++j)
            CHECK((projections[i] * projections[j]).max_abs() < 1e-10);
        sum += p;
    }
    CHECK((sum - ComplexMatrix::identity(6)).max_abs() < 1e-10);

    const SpectralUnitary back = SpectralUnitary::from_projections(eigenvalues, projections);
    CHECK((back.to_matrix() - a.to_matrix()).max_abs() < 1e-10);

    // Rank-zero projections are tolerated (they carry no spectral weight).
    eigenvalues.push_back(Complex(0.0, 1.0));
    projections.push_back(ComplexMatrix(6));
    const SpectralUnitary padded = SpectralUnitary::from_projections(eigenvalues, projections);
    CHECK((padded.to_matrix() - a.to_matrix()).max_abs() < 1e-10);

    // Overlapping projections violate orthogonality and are rejected.
    std::vector<Complex> bad_eigs{Complex(1.0, 0.0), Complex(0.0, 1.0)};
    std::vector<ComplexMatrix> bad_projs{a.projection(0), a.projection(0)};
    CHECK_THROWS_AS(SpectralUnitary::from_projections(bad_eigs, bad_projs), std::runtime_error);
}

TEST_CASE("random contraction pair invariants") {
    const ContractionPair p1 = random_contraction_pair(1, 21, 2.0, 0.1);
    CHECK(std::abs(p1.u0(0, 0)) <= 1.0 + 1e-10);
    CHECK(std::abs(p1.u0(0, 0) + p1.v(0, 0)) <= 1.0 + 1e-10);

    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const double target = 0.4;
        const ContractionPair p = random_contraction_pair(6, seed, 3.0, target);
        CHECK(operator_norm(p.u0) <= 1.0 + 1e-10);
        CHECK(operator_norm(p.u0 + p.v) <= 1.0 + 1e-10);
        CHECK(schatten_norm(p.v, 3.0) == doctest::Approx(target).epsilon(1e-10));
    }

    const ContractionPair a = random_contraction_pair(5, 77, 2.0, 0.3);
    const ContractionPair b = random_contraction_pair(5, 77, 2.0, 0.3);
    CHECK((a.u0 - b.u0).max_abs() == 0.0);
    CHECK((a.v - b.v).max_abs() == 0.0);

    // Unitary start: the pair keeps the contraction property too.
    ContractionPairOptions opts;
    opts.unitary_u0 = true;
    const ContractionPair pu = random_contraction_pair(6, 5, 2.0, 0.3, opts);
    CHECK(operator_norm(pu.u0) <= 1.0 + 1e-10);
    CHECK(operator_norm(pu.u0 + pu.v) <= 1.0 + 1e-10);

    // Far-out targets are rejected with the largest feasible norm quoted.
    CHECK_THROWS_WITH_AS(random_contraction_pair(4, 9, 2.0, 50.0),
                         doctest::Contains("largest feasible norm"), std::invalid_argument);
}

TEST_CASE("discretize_unitary grid mapping") {
    // Eigenvalues already on the grid stay put.
    const SpectralUnitary u = random_unitary(4, 31);
    const SpectralUnitary on_grid = discretize_unitary(u, 16);
    const SpectralUnitary again = discretize_unitary(on_grid, 16);
    CHECK((on_grid.to_matrix() - again.to_matrix()).max_abs() < 1e-12);

    // e^{i pi/3} with N = 8 lands on grid index floor(8/6) = 1 -> e^{i pi/4}.
    ComplexMatrix basis = ComplexMatrix::identity(1);
    const SpectralUnitary single =
        SpectralUnitary::from_eigenbasis({std::polar(1.0, std::numbers::pi / 3.0)}, basis);
    const SpectralUnitary snapped = discretize_unitary(single, 8);
    CHECK(std::abs(snapped.eigenvalue(0) - std::polar(1.0, std::numbers::pi / 4.0)) < 1e-12);

    CHECK_THROWS_AS(discretize_unitary(u, 0), std::invalid_argument);
}

TEST_CASE("discretization power bound 2 pi k / N") {
    for (std::uint64_t seed : {3ULL, 4ULL, 5ULL}) {
        const SpectralUnitary u = random_unitary(6, seed);
        for (int n : {8, 32, 128}) {
            const SpectralUnitary un = discretize_unitary(u, n);
            CHECK(operator_norm(u.to_matrix() - un.to_matrix()) <= kTwoPi / n + 1e-12);
            for (int k = 1; k <= 20; ++k)
                CHECK(operator_norm(u.power(k) - un.power(k)) <= kTwoPi * k / n + 1e-12);
        }
    }
}

TEST_CASE("json wire formats") {
    SplitRng rng(97, "json");
    const ComplexMatrix m = random_gaussian_matrix(3, rng);
    const ComplexMatrix back = opshift::io::matrix_from_json(opshift::io::matrix_to_json(m));
    CHECK((m - back).max_abs() == 0.0);

    const ContractionPair pair = random_contraction_pair(3, 5, 2.0, 0.2);
    const ContractionPair pback = opshift::io::pair_from_json(opshift::io::pair_to_json(pair));
    CHECK((pair.u0 - pback.u0).max_abs() == 0.0);
    CHECK((pair.v - pback.v).max_abs() == 0.0);

    CHECK_THROWS_AS(opshift::io::matrix_from_json(nlohmann::json{{"dim", 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        opshift::io::matrix_from_json(nlohmann::json{{"dim", 2}, {"entries", {1, 2, 3}}}),
        std::invalid_argument);
}

TEST_CASE("schatten Hoelder inequality and unitary invariance") {
    SplitRng rng(13, "hoelder");
    const std::vector<std::array<double, 3>> pqr = {
        {2.0, 2.0, 1.0}, {4.0, 4.0, 2.0}, {3.0, 6.0, 2.0}, {kInf, 2.0, 2.0}, {1.0, kInf, 1.0}};
    for (int t = 0; t < 10; ++t) {
        const ComplexMatrix x = random_gaussian_matrix(5, rng);
        const ComplexMatrix y = random_gaussian_matrix(5, rng);
        for (const auto& [p, q, r] : pqr)
            CHECK(schatten_norm(x * y, r) <= schatten_norm(x, p) * schatten_norm(y, q) + 1e-9);

        const ComplexMatrix u = random_unitary(5, rng.next_u64()).to_matrix();
        const ComplexMatrix w = random_unitary(5, rng.next_u64()).to_matrix();
        for (double p : {1.0, 2.0, 3.5, kInf})
            CHECK(schatten_norm(u * x * w, p) ==
                  doctest::Approx(schatten_norm(x, p)).epsilon(1e-9));

        // Monotone nonincreasing in p.
        double prev = schatten_norm(x, 1.0);
        for (double p : {1.5, 2.0, 3.0, 5.0, 10.0}) {
            const double cur = schatten_norm(x, p);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        CHECK(schatten_norm(x, kInf) <= prev + 1e-12);
    }
}
