import numpy as np
import pytest
from numpy.testing import assert_allclose

from thirdperiodic.errors import DimensionError, FamilyTooLargeError, SingularShiftError
from thirdperiodic.multiplier import (
    decay_estimate,
    matrix_norm,
    mode_symbol,
    r_bound_estimate,
    rademacher_ratio,
    symbol_family,
    telescoping_check,
)
from thirdperiodic.operators import dense_operator, diagonal_operator, dirichlet_laplacian, scalar_operator
from thirdperiodic.oracle import exhaustive_rademacher


def scalar_symbol(a, k):
    lam = -1j * k**3
    return lam / (lam - a)


def test_mode_symbol_k0_vanishes():
    for A in (dirichlet_laplacian(4), scalar_operator(-1), diagonal_operator([1, 2, 3])):
        assert not np.any(mode_symbol(A, 0))


def test_mode_symbol_scalar_k1():
    M = mode_symbol(scalar_operator(-1), 1)
    assert_allclose(M, [[(1 - 1j) / 2]], rtol=1e-15)
    assert_allclose(abs(M[0, 0]), np.sqrt(2) / 2, rtol=1e-15)


def test_mode_symbol_singular():
    with pytest.raises(SingularShiftError):
        mode_symbol(diagonal_operator([-8j]), 2)


def test_symbol_identity_laplacian():
    A = dirichlet_laplacian(8)
    Ad = A.to_dense()
    for k in range(1, 41):
        M = mode_symbol(A, k)
        R = A.shifted_solve(-1j * k**3, np.eye(8))
        assert matrix_norm(M - (np.eye(8) + Ad @ R)) <= 1e-11 * (1 + matrix_norm(M))


def test_symbol_norm_vs_eigendecomposition():
    A = dirichlet_laplacian(10)
    mu = np.linalg.eigvalsh(A.to_dense().real)
    for k in list(range(-30, 0)) + list(range(1, 31)):
        expected = np.max(abs(k) ** 3 / np.sqrt(k**6 + mu**2))
        assert_allclose(matrix_norm(mode_symbol(A, k)), expected, rtol=1e-12)
        assert expected < 1


def test_telescoping_scalar_k1():
    rep = telescoping_check(scalar_operator(-1), (1, 1))
    M1, M2 = scalar_symbol(-1, 1), scalar_symbol(-1, 2)
    direct = 1 * (M2 - M1)
    closed = (1 / 8) * (3 + 3 + 1) * M2 * (1 - M1)
    assert abs(direct - closed) <= 1e-13
    assert rep.max_deviation <= 1e-13


def test_telescoping_laplacian_window50():
    rep = telescoping_check(dirichlet_laplacian(8), (-50, 50))
    assert rep.max_deviation <= 1e-10
    assert {s["k"] for s in rep.skipped} == {0, -1}
    assert len(rep.rows) == 99


def test_telescoping_sup_stabilizes():
    A = diagonal_operator([1.0])
    sups = [telescoping_check(A, (-K, K)).sup_difference_norm for K in (10, 20, 40, 80)]
    assert all(b >= a for a, b in zip(sups, sups[1:]))
    assert sups[-1] - sups[-2] <= 1e-12 * sups[-1]


def test_telescoping_sign_convention_matters():
    # with the opposite sign the closed form fails; guards against silently flipping it
    A = dirichlet_laplacian(4)
    M1, M2 = mode_symbol(A, 3), mode_symbol(A, 4)
    direct = 3 * (M2 - M1)
    wrong = -(27 / 64) * (3 + 1 + 1 / 9) * M2 @ (np.eye(4) - M1)
    assert matrix_norm(direct - wrong) > 0.5 * matrix_norm(direct)


def test_r_bound_identity_family():
    fam = [np.eye(2)]
    for method in ("hilbert-exact", "enumeration", "monte-carlo"):
        est = r_bound_estimate(fam, method=method, trials=200, n_probes=4)
        assert_allclose(est.value, 1.0, rtol=1e-12)


def test_r_bound_zero_family():
    fam = [np.zeros((2, 2))] * 3
    for method in ("hilbert-exact", "enumeration", "monte-carlo"):
        assert r_bound_estimate(fam, method=method, trials=200, n_probes=4).value == 0.0


def test_r_bound_scalar_family_exact():
    fam = symbol_family(scalar_operator(-1), (-20, 20))
    est = r_bound_estimate(fam.matrices(), method="hilbert-exact")
    ks = np.arange(-20, 21)
    expected = np.max(np.abs(ks) ** 3 / np.sqrt(ks**6 + 1.0))
    assert abs(est.value - expected) <= 1e-12
    assert est.value < 1
    assert est.bound == "exact"


def test_r_bound_errors():
    with pytest.raises(ValueError):
        r_bound_estimate([])
    with pytest.raises(DimensionError):
        r_bound_estimate([np.eye(2), np.eye(3)])
    with pytest.raises(FamilyTooLargeError):
        r_bound_estimate([np.eye(1)] * 13, method="enumeration")
    with pytest.raises(ValueError):
        r_bound_estimate([np.eye(1)], p=3, method="hilbert-exact")


def test_rademacher_ratio_matches_orthogonality(rng):
    T = [rng.standard_normal((3, 3)) for _ in range(4)]
    X = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    closed = np.sqrt(sum(np.linalg.norm(t @ x) ** 2 for t, x in zip(T, X)) / np.sum(np.abs(X) ** 2))
    assert_allclose(rademacher_ratio(T, X), closed, rtol=1e-13)
    assert_allclose(exhaustive_rademacher(T, X), closed, rtol=1e-13)


def test_enumeration_reaches_exact_at_p2(rng):
    T = [rng.standard_normal((2, 2)) for _ in range(5)]
    exact = r_bound_estimate(T, method="hilbert-exact").value
    enum = r_bound_estimate(T, method="enumeration", seed=3)
    assert enum.value <= exact * (1 + 1e-12)
    assert enum.value >= exact * (1 - 1e-6)
    assert enum.bound == "lower"
    assert_allclose(rademacher_ratio(T, enum.argmax), enum.value, rtol=1e-12)


def test_enumeration_p4_is_certified_lower_bound(rng):
    T = [rng.standard_normal((2, 2)) for _ in range(3)]
    est = r_bound_estimate(T, p=4, method="enumeration", seed=1, n_probes=8)
    # the returned probe attains the value under exhaustive enumeration
    assert_allclose(exhaustive_rademacher(T, est.argmax, p=4), est.value, rtol=1e-12)
    # at least as large as the single-operator ratios it can reach
    assert est.value >= max(np.linalg.norm(t, 2) for t in T) * (1 - 1e-6)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_r_bound_ordering(rng, seed):
    T = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(6)]
    probes = [rng.standard_normal((6, 2)) for _ in range(4)]
    mc = r_bound_estimate(T, probes=probes, method="monte-carlo", trials=4000, seed=seed, n_probes=4)
    enum = r_bound_estimate(T, probes=probes, method="enumeration", seed=seed, n_probes=4)
    exact = r_bound_estimate(T, method="hilbert-exact")
    assert mc.value <= enum.value <= exact.value * (1 + 1e-12)


def test_monte_carlo_reproducible():
    fam = symbol_family(scalar_operator(-1), (-5, 5)).matrices()
    a = r_bound_estimate(fam, method="monte-carlo", trials=500, seed=9)
    b = r_bound_estimate(fam, method="monte-carlo", trials=500, seed=9)
    assert a.value == b.value
    assert a.to_dict()["seed"] == 9


def test_decay_scalar():
    fit = decay_estimate(scalar_operator(-1), (-30, 30))
    assert_allclose(fit.per_mode[0], 1.0, rtol=1e-15)
    for k, v in fit.per_mode.items():
        assert_allclose(v, (1 + abs(k) ** 3) / np.sqrt(k**6 + 1), rtol=1e-13)
        assert v <= np.sqrt(2) + 1e-15
    assert fit.c_hat == max(fit.per_mode.values())
    assert not fit.near_singular


def test_decay_laplacian_window_stable():
    A = dirichlet_laplacian(16)
    a = decay_estimate(A, (-40, 40))
    b = decay_estimate(A, (-80, 80))
    assert np.isfinite(a.c_hat)
    assert abs(a.argmax) <= 3
    assert abs(b.c_hat - a.c_hat) < 1e-9
    assert a.sup_symbol_norm < 1


def test_decay_near_resonant():
    fit = decay_estimate(diagonal_operator([-8j * (1 + 1e-6)]), (-5, 5))
    assert fit.per_mode[2] > 1e5
    assert fit.near_singular == [2]
    # distance to the spectrum is 8e-6, so ||Delta_2^{-1}|| = 1.25e5
    assert_allclose(fit.per_mode[2], 9 / 8e-6, rtol=1e-6)


def test_symbol_family_norm_kinds(rng):
    A = dense_operator(-np.eye(3) + 0.1 * rng.standard_normal((3, 3)))
    fam = symbol_family(A, (-3, 3))
    assert fam.modes == list(range(-3, 4))
    spec, col = fam.norms("spectral"), fam.norms("column")
    for k in fam.modes:
        # ||M||_2 <= sqrt(d) ||M||_1
        assert spec[k] <= np.sqrt(3) * col[k] + 1e-15
