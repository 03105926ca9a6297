"""
Brute-force reference solvers for testing.

``collocation_solve`` assembles the whole space-time system
(D3 kron I - I kron A) vec(z) = vec(f) and solves it densely, with D3 either
the spectral third-derivative matrix or a second-order finite-difference stencil.
These are deliberately slow and share no code with the per-mode solver.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.linalg

from .errors import DimensionError, FamilyTooLargeError, SingularSystemError
from .operators import LinearOperator
from .spectra import PeriodicSignal

__all__ = [
    "MAX_SYSTEM_SIZE",
    "spectral_d3_matrix",
    "fd2_d3_matrix",
    "collocation_system",
    "collocation_solve",
    "exhaustive_rademacher",
]

MAX_SYSTEM_SIZE = 4096


def spectral_d3_matrix(N: int) -> np.ndarray:
    """Circulant matrix with eigenvalue (ik)^3 on modes |k| <= (N-1)//2.

    For even N the Nyquist mode is mapped to zero.
    """
    K = (N - 1) // 2
    j = np.arange(N)
    col = np.zeros(N)
    for k in range(1, K + 1):
        # (ik)^3 e^{ikt} + (-ik)^3 e^{-ikt} = 2 k^3 sin(kt)
        col += 2.0 * k**3 * np.sin(2 * np.pi * k * j / N)
    return scipy.linalg.circulant(col / N)


def fd2_d3_matrix(N: int) -> np.ndarray:
    """Periodic central stencil (-1/2, 1, 0, -1, 1/2)/h^3 on offsets -2..2."""
    if N < 5:
        raise ValueError("the five-point stencil needs N >= 5")
    h = 2 * np.pi / N
    D = np.zeros((N, N))
    for offset, w in zip((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)):
        D[np.arange(N), (np.arange(N) + offset) % N] += w
    return D / h**3


def collocation_system(A: LinearOperator, N: int, mode: str = "spectral-d3") -> np.ndarray:
    d = A.dim
    if N * d > MAX_SYSTEM_SIZE:
        raise ValueError(f"space-time system of size {N * d} exceeds the cap {MAX_SYSTEM_SIZE}")
    if mode == "spectral-d3":
        D3 = spectral_d3_matrix(N)
    elif mode == "fd2-d3":
        D3 = fd2_d3_matrix(N)
    else:
        raise ValueError(f"unknown collocation mode {mode!r}")
    return np.kron(D3, np.eye(d)) - np.kron(np.eye(N), A.to_dense())


def collocation_solve(A: LinearOperator, f: PeriodicSignal, mode: str = "spectral-d3") -> PeriodicSignal:
    """Solve the discretized periodic problem as one dense linear system."""
    if f.d != A.dim:
        raise DimensionError(f"forcing has dimension {f.d}, operator has {A.dim}")
    L = collocation_system(A, f.N, mode)
    s = scipy.linalg.svdvals(L)
    if s.min() <= 1e-12 * s.max():
        raise SingularSystemError(f"collocation system is singular (sigma_min = {s.min():.3e})")
    z = np.linalg.solve(L, f.samples.reshape(-1))
    return PeriodicSignal(z.reshape(f.N, f.d))


def exhaustive_rademacher(family, probes, p: float = 2.0) -> float:
    """Exact Rademacher ratio for one probe set, enumerating all 2^n sign patterns."""
    mats = [np.atleast_2d(np.asarray(T, dtype=complex)) for T in family]
    n = len(mats)
    if n > 12:
        raise FamilyTooLargeError(f"exhaustive enumeration supports at most 12 operators, got {n}")
    xs = [np.atleast_1d(np.asarray(x, dtype=complex)) for x in probes]
    if len(xs) != n:
        raise DimensionError("need one probe vector per operator")
    ys = [T @ x for T, x in zip(mats, xs)]
    num = den = 0.0
    for signs in itertools.product((1, -1), repeat=n):
        num += np.linalg.norm(sum(r * y for r, y in zip(signs, ys))) ** p
        den += np.linalg.norm(sum(r * x for r, x in zip(signs, xs))) ** p
    if den == 0:
        return 0.0
    return float((num / den) ** (1.0 / p))
