"""Smoke tests for the python bindings: a thin pass over each bound surface.
The heavy verification lives in the C++ suites."""

import numpy as np
import pytest

import opshift


def test_schatten_norms():
    assert opshift.schatten_norm(np.eye(4, dtype=complex), 2.0) == pytest.approx(2.0)
    d = np.diag([3.0 + 0j, 4.0 + 0j])
    assert opshift.schatten_norm(d, 1.0) == pytest.approx(7.0)
    assert opshift.schatten_norm(d, float("inf")) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        opshift.schatten_norm(d, 0.5)


def test_random_unitary_is_unitary_and_deterministic():
    u = opshift.random_unitary(8, 42)
    mat = u.matrix()
    assert np.linalg.norm(mat.conj().T @ mat - np.eye(8)) < 1e-10
    assert np.allclose(mat, opshift.random_unitary(8, 42).matrix())
    assert u.group_count == 8


def test_discretization_bound():
    u = opshift.random_unitary(6, 7)
    un = opshift.discretize_unitary(u, 32)
    for k in (1, 5, 20):
        diff = np.linalg.norm(u.power(k) - un.power(k), ord=2)
        assert diff <= 2 * np.pi * k / 32 + 1e-12


def test_derivative_identities():
    u0, v = opshift.random_contraction_pair(6, 3, 2.0, 0.3, unitary_u0=True)
    f = [0.0, 1.0, 0.5, 0.25, 0.125]  # polynomial coefficients
    d_path = opshift.derivative_poly_path(u0, v, f, 2, 0.0)
    assert np.all(np.isfinite(d_path))

    assert opshift.trace_identity_check(u0, v, f, 2, 0.37) < 1e-9

    r1 = opshift.taylor_remainder(u0, v, f, 2)
    r2 = opshift.remainder_via_integral(u0, v, f, 2)
    assert np.linalg.norm(r1 - r2) < 1e-10


def test_moi_route_matches_path_route():
    spec, u0, v = opshift.random_unitary_pair(5, 11, 2.0, 0.2)
    f = [0.0, 0.0, 1.0, 0.3]
    d_moi = opshift.derivative_moi(spec, v, f, 2)
    d_path = opshift.derivative_poly_path(u0, v, f, 2, 0.0)
    assert np.linalg.norm(d_moi - d_path) < 1e-9


def test_divided_difference_and_phi():
    f = [0.0, 0.0, 1.0]  # z^2
    nodes = [np.exp(0.3j), np.exp(1.1j)]
    dd = opshift.divided_difference(f, nodes)
    assert dd == pytest.approx(nodes[0] + nodes[1])

    # phi with m = k = 0 and h = f^(n) evaluates the divided difference.
    phi = opshift.eval_phi(1, [0.0, 2.0], 0, 0, nodes)  # h = (z^2)' = 2z
    assert phi == pytest.approx(dd)

    assert opshift.diagonal_constant(2, 1, 1) == pytest.approx(0.5)


def test_ssf_round_trip():
    u0, v = opshift.random_midpoint_pair(6, 9)
    n, K = 2, 10
    coeffs = opshift.reconstruct_ssf(u0, v, n, K)
    assert len(coeffs) == K

    # The trace formula holds on a sampled polynomial.
    f = [0.1, -0.3, 0.7, 0.0, 0.2, 0.05]
    assert opshift.verify_trace_formula(u0, v, f, n, K) < 1e-8

    # Pairing of z^k's n-th derivative against the series returns the moment.
    zk = [0.0] * 4 + [1.0]  # z^4
    d2 = [0.0, 0.0, 12.0]  # (z^4)'' = 12 z^2
    moment = np.trace(opshift.taylor_remainder(u0, v, zk, n))
    assert opshift.pairing(d2, coeffs, n) == pytest.approx(moment, abs=1e-10)

    # Zero perturbation gives the zero series.
    zeros = opshift.reconstruct_ssf(u0, np.zeros_like(u0), n, K)
    assert max(abs(c) for c in zeros) == 0.0

    assert opshift.l1_estimate(coeffs) >= 0.0
