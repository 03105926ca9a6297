"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` to see the
per-criterion summary lines next to pytest's own verdicts.
"""

import json
import time

import numpy as np
import pytest

from conftest import direct_synthesis, random_coeffs
from thirdperiodic.cli import main
from thirdperiodic.diagnosis import diagnose
from thirdperiodic.errors import SingularShiftError, WellPosednessError
from thirdperiodic.forcing import forcing_catalog
from thirdperiodic.multiplier import matrix_norm, r_bound_estimate, symbol_family, telescoping_check, decay_estimate
from thirdperiodic.operators import diagonal_operator, dirichlet_laplacian, scalar_operator
from thirdperiodic.oracle import collocation_solve, exhaustive_rademacher
from thirdperiodic.solver import kernel_witness_check, solve_periodic, spectrum_gate
from thirdperiodic.spectra import PeriodicSignal, SpectralCoefficients, dft, fejer_sum, synthesize

TEST_OPERATORS = {
    "scalar(-1)": lambda: scalar_operator(-1),
    "diag(1,2,3)": lambda: diagonal_operator([1.0, 2.0, 3.0]),
    "laplacian(8)": lambda: dirichlet_laplacian(8),
    "laplacian(16)": lambda: dirichlet_laplacian(16),
}
SELF_ADJOINT_NEG_DEF = ("scalar(-1)", "laplacian(8)", "laplacian(16)")


def verdict(n, ok, detail):
    print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_solver_matches_collocation():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst_dev = worst_res = 0.0
    for name, make in TEST_OPERATORS.items():
        A = make()
        for degree in (0, 3, 8):
            for real in (True, False):
                N = 32
                c = random_coeffs(rng, degree, A.dim, real=real)
                f = synthesize(c, N)
                f = PeriodicSignal(f.samples.real) if real else f
                rep = solve_periodic(A, f, 15)
                z = collocation_solve(A, f, "spectral-d3")
                dev = np.max(np.abs(rep.solution.samples - z.samples)) / rep.scale
                worst_dev = max(worst_dev, dev)
                worst_res = max(worst_res, rep.residual_l2 / rep.scale)
    elapsed = time.perf_counter() - t0
    ok = worst_dev <= 1e-9 and worst_res <= 1e-10 and elapsed < 5
    verdict(1, ok, f"max dev/scale {worst_dev:.2e}, max residual/scale {worst_res:.2e}, {elapsed:.2f}s")


def test_criterion_02_forward_direction():
    lines, ok = [], True
    for name, make in TEST_OPERATORS.items():
        rep = diagnose(make(), (-50, 50), seed=0)
        sup = rep["sup_symbol_norm"]
        good = rep["sigma_Z"] == [] and rep["gate"]["certified_beyond"] and sup is not None and np.isfinite(sup)
        if name in SELF_ADJOINT_NEG_DEF:
            good = good and sup < 1 + 1e-9
        ok &= bool(good)
        lines.append(f"{name}: sup {sup:.12f}")
    verdict(2, ok, "; ".join(lines))


def test_criterion_03_reverse_direction(tmp_path, capsys):
    t0 = time.perf_counter()
    A = diagonal_operator([-8j])
    gate = spectrum_gate(A, (-5, 5))
    flagged = gate.singular_modes == [2]

    f = forcing_catalog("mode", [2], N=16, d=1)
    try:
        solve_periodic(A, f, 5)
        refused = False
    except WellPosednessError as exc:
        refused = exc.singular_modes == [2]
    code = main(["solve", "--operator", '{"kind":"diagonal","entries":[[0,-8]]}', "--forcing", "mode(2)",
                 "-K", "5", "-N", "16", "--out", str(tmp_path)])
    capsys.readouterr()

    # residual contract: the guarded factorization refuses, and the best
    # least-squares answer to (-8i - A) x = f_hat(2) leaves the full residual
    try:
        A.shifted_solve(-8j, np.array([1.0]))
        guarded = False
    except SingularShiftError:
        guarded = True
    S = np.array([[-8j]]) - A.to_dense()
    fhat = dft(f, 5)[2]
    x = np.linalg.lstsq(S, fhat, rcond=None)[0]
    lsq_residual = np.linalg.norm(S @ x - fhat)
    contract_fails = guarded and lsq_residual > 1e-10 * (1 + np.linalg.norm(fhat))
    # mode 2 is a genuine kernel direction of the periodic problem
    witness = kernel_witness_check(A, 2, [1.0]) <= 1e-10
    elapsed = time.perf_counter() - t0
    ok = flagged and refused and code == 2 and contract_fails and witness and elapsed < 1
    verdict(3, ok, f"flagged {gate.singular_modes}, exit {code}, lsq residual {lsq_residual:.3g}, {elapsed:.3f}s")


def test_criterion_04_telescoping():
    worst = {}
    for name, make in TEST_OPERATORS.items():
        rep = telescoping_check(make(), (-50, 50))
        assert {s["k"] for s in rep.skipped} == {0, -1}
        worst[name] = rep.max_deviation
    ok = max(worst.values()) <= 1e-10
    verdict(4, ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_05_r_bound_regimes():
    fam = symbol_family(scalar_operator(-1), (-20, 20)).matrices()
    exact = r_bound_estimate(fam, method="hilbert-exact").value
    max_norm = max(matrix_norm(M) for M in fam)
    exact_ok = abs(exact - max_norm) <= 1e-12

    # enumeration against the orthogonality closed form on n <= 12 subfamilies
    rng = np.random.default_rng(5)
    worst_enum = 0.0
    for n in (1, 2, 5, 12):
        idx = rng.choice(len(fam), size=n, replace=False)
        T = [fam[i] for i in idx]
        X = rng.standard_normal((n, 1)) + 1j * rng.standard_normal((n, 1))
        closed = np.sqrt(sum(np.linalg.norm(t @ x) ** 2 for t, x in zip(T, X)) / np.sum(np.abs(X) ** 2))
        worst_enum = max(worst_enum, abs(exhaustive_rademacher(T, X) - closed) / closed)
    enum_ok = worst_enum <= 1e-13

    mc = r_bound_estimate(fam, method="monte-carlo", trials=10_000, seed=0).value
    mc_ok = 0.95 * exact <= mc <= exact
    ok = exact_ok and enum_ok and mc_ok
    verdict(5, ok, f"exact {exact:.15f} vs max norm {max_norm:.15f}; enum rel err {worst_enum:.1e}; mc {mc:.6f}")


def test_criterion_06_laplacian_decay():
    A = dirichlet_laplacian(16)
    a = decay_estimate(A, (-80, 80))
    b = decay_estimate(A, (-160, 160))
    change = abs(b.c_hat - a.c_hat)
    ok = np.isfinite(a.c_hat) and change < 1e-9 and not a.near_singular
    verdict(6, ok, f"c_hat {a.c_hat:.12f} at k={a.argmax}, change on doubling {change:.1e}")


def test_criterion_07_fejer():
    n_max = 500
    N = 2 * n_max + 1
    entries = {0: [1.0]}
    for k in range(1, 6):
        entries[k] = entries[-k] = [0.5 / 4**k]
    c = SpectralCoefficients.from_modes(n_max, 1, entries)
    f = direct_synthesis(c, N)
    errs = np.array([(fejer_sum(c, n, N) - f).l2_norm() for n in range(0, n_max + 1)])
    monotone = bool(np.all(np.diff(errs) <= 1e-15))
    partial5 = synthesize(SpectralCoefficients.from_modes(5, 1, entries), N)
    exact5 = np.max(np.abs(partial5.samples - f.samples)) <= 1e-14
    ok = monotone and errs[-1] < 1e-3 and exact5
    verdict(7, ok, f"error at n=500 {errs[-1]:.3e}, monotone {monotone}, partial sum n=5 exact {exact5}")


def test_criterion_08_fd_order():
    errs = []
    for N in (32, 64, 128):
        z = collocation_solve(scalar_operator(-1), forcing_catalog("mode", [1], N=N, d=1), "fd2-d3")
        exact = (1 + 1j) / 2 * np.exp(2j * np.pi * np.arange(N) / N)
        errs.append(np.max(np.abs(z.samples[:, 0] - exact)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    ok = bool(np.all(np.abs(orders - 2.0) <= 0.2))
    verdict(8, ok, f"observed orders {np.round(orders, 3).tolist()}")


def test_criterion_09_transforms():
    worst_rt = worst_conj = worst_pars = 0.0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        K = int(rng.integers(0, 12))
        d = int(rng.integers(1, 6))
        N = 2 * K + 1 + int(rng.integers(0, 10))
        real = bool(seed % 2)
        c = random_coeffs(rng, K, d, real=real)
        f = synthesize(c, N)
        cmax = np.max(np.abs(c.coeffs))
        worst_rt = max(worst_rt, np.max(np.abs(dft(f, K).coeffs - c.coeffs)) / cmax)
        energy = np.sum(np.abs(c.coeffs) ** 2)
        worst_pars = max(worst_pars, abs(np.mean(np.sum(np.abs(f.samples) ** 2, axis=1)) - energy) / energy)
        if real:
            cr = dft(PeriodicSignal(f.samples.real), K)
            for k in range(1, K + 1):
                worst_conj = max(worst_conj, np.max(np.abs(cr[-k] - cr[k].conj())) / cmax)
    ok = max(worst_rt, worst_conj, worst_pars) <= 1e-12
    verdict(9, ok, f"round trip {worst_rt:.1e}, conjugate symmetry {worst_conj:.1e}, Parseval {worst_pars:.1e}")


@pytest.mark.parametrize("operator", ['{"kind":"dirichlet_laplacian","n":8}', '{"kind":"scalar","entries":[[-1,0]]}'])
def test_criterion_10_determinism(tmp_path, operator, capsys):
    blobs = []
    for run in range(2):
        out = tmp_path / f"run{run}"
        assert main(["diagnose", "--operator", operator, "--seed", "42", "--out", str(out)]) == 0
        blobs.append((out / "diagnosis.json").read_bytes())
    capsys.readouterr()
    report = json.loads(blobs[0])
    ok = blobs[0] == blobs[1] and report["r_bound_mc"]["seed"] == 42
    verdict(10, ok, f"{len(blobs[0])} bytes, identical {blobs[0] == blobs[1]}")
