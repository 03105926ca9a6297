"""
The mode-symbol family M_k = -ik^3 (-ik^3 I - A)^{-1} and its diagnostics.

Sign convention: Delta_k = -ik^3 I - A throughout, so that the Fourier
coefficients of a periodic solution of z''' = Az + f satisfy
Delta_k z_k = f_k. Replacing A by -A gives the form -ik^3 I + A.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, FamilyTooLargeError
from .operators import LinearOperator

__all__ = [
    "ModeSymbolFamily",
    "RBoundEstimate",
    "DecayFit",
    "TelescopingReport",
    "shift_for_mode",
    "mode_symbol",
    "symbol_family",
    "telescoping_check",
    "telescoping_closed_form",
    "rademacher_ratio",
    "r_bound_estimate",
    "decay_estimate",
    "matrix_norm",
    "NEAR_SINGULAR_RTOL",
]

CONVENTION = "Delta_k = -i k^3 I - A"
ENUMERATION_MAX = 12
DEFAULT_TRIALS = 10_000
DEFAULT_PROBES = 32
# monte-carlo values are reported this many standard errors below the sample ratio
MC_SIGMAS = 3.0
# decay_estimate flags modes whose margin sigma_min(Delta_k) is below this fraction of |lam| + ||A||
NEAR_SINGULAR_RTOL = 1e-5


def shift_for_mode(k: int) -> complex:
    """lambda_k = -i k^3, the shift at which Delta_k = lambda_k I - A."""
    return complex(0.0, -float(k) ** 3)


def matrix_norm(M, kind="spectral") -> float:
    if kind == "spectral":
        return float(np.linalg.norm(M, 2))
    if kind == "column":
        return float(np.max(np.sum(np.abs(M), axis=0)))
    raise ValueError(f"unknown norm {kind!r}")


def mode_symbol(A: LinearOperator, k: int) -> np.ndarray:
    """M_k assembled column by column from shifted solves at lambda = -ik^3.

    Raises SingularShiftError when k lies in sigma_Z(Delta).
    """
    lam = shift_for_mode(k)
    cols = A.shifted_solve(lam, np.eye(A.dim, dtype=complex))
    return lam * cols


def _resolvent(A, k):
    return A.shifted_solve(shift_for_mode(k), np.eye(A.dim, dtype=complex))


@dataclass
class ModeSymbolFamily:
    window: tuple
    symbols: dict
    convention: str = CONVENTION

    @property
    def modes(self):
        return sorted(self.symbols)

    def norms(self, kind="spectral") -> dict:
        return {k: matrix_norm(M, kind) for k, M in self.symbols.items()}

    def sup_norm(self, kind="spectral") -> float:
        return max(self.norms(kind).values())

    def matrices(self) -> list:
        return [self.symbols[k] for k in self.modes]


def symbol_family(A: LinearOperator, window) -> ModeSymbolFamily:
    lo, hi = window
    return ModeSymbolFamily((lo, hi), {k: mode_symbol(A, k) for k in range(lo, hi + 1)})


# -- telescoping (Marcinkiewicz) differences -------------------------------


def telescoping_closed_form(M_k, M_k1, k):
    """(k^3/(k+1)^3) (3 + 3/k + 1/k^2) M_{k+1} (I - M_k), valid for k not in {0, -1}."""
    factor = (k**3 / (k + 1) ** 3) * (3 + 3 / k + 1 / k**2)
    eye = np.eye(M_k.shape[0])
    return factor * (M_k1 @ (eye - M_k))


@dataclass
class TelescopingReport:
    window: tuple
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((r["deviation"] for r in self.rows), default=0.0)

    @property
    def max_relative_to_difference(self) -> float:
        return max((r["deviation_rel_direct"] for r in self.rows), default=0.0)

    @property
    def sup_difference_norm(self) -> float:
        return max((r["direct_norm"] for r in self.rows), default=0.0)

    def to_dict(self):
        return {
            "window": list(self.window),
            "max_deviation": self.max_deviation,
            "sup_difference_norm": self.sup_difference_norm,
            "skipped": self.skipped,
            "rows": self.rows,
        }


def telescoping_check(A: LinearOperator, window) -> TelescopingReport:
    """Compare k(M_{k+1} - M_k) with its closed form for every k in the window.

    ``deviation`` is ||direct - closed|| / (1 + ||M_k|| ||M_{k+1}||).
    k = 0 and k = -1 are skipped (the closed form divides by k and k+1).
    """
    lo, hi = window
    symbols = {k: mode_symbol(A, k) for k in range(lo, hi + 2)}
    report = TelescopingReport((lo, hi))
    for k in range(lo, hi + 1):
        D = k * (symbols[k + 1] - symbols[k])
        if k in (0, -1):
            report.skipped.append({"k": k, "reason": "closed form undefined", "direct_norm": matrix_norm(D)})
            continue
        C = telescoping_closed_form(symbols[k], symbols[k + 1], k)
        err = matrix_norm(D - C)
        dnorm = matrix_norm(D)
        scale = 1.0 + matrix_norm(symbols[k]) * matrix_norm(symbols[k + 1])
        report.rows.append(
            {
                "k": k,
                "direct_norm": dnorm,
                "deviation": err / scale,
                "deviation_rel_direct": err / dnorm if dnorm > 0 else err,
            }
        )
    return report


# -- R-bounds ---------------------------------------------------------------


@dataclass
class RBoundEstimate:
    value: float
    method: str
    bound: str
    p: float = 2.0
    trials: int | None = None
    probes: int | None = None
    seed: int | None = None
    argmax: object = None

    def to_dict(self):
        d = {"value": self.value, "method": self.method, "bound": self.bound, "p": self.p}
        for key in ("trials", "probes", "seed"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        return d


def _stack(family):
    mats = [np.atleast_2d(np.asarray(T, dtype=complex)) for T in family]
    if not mats:
        raise ValueError("R-bound needs a non-empty family")
    shape = mats[0].shape
    if shape[0] != shape[1] or any(T.shape != shape for T in mats):
        raise DimensionError("all family members must be square matrices of the same size")
    return np.stack(mats)


def _sign_patterns(n):
    return np.array(list(itertools.product((1.0, -1.0), repeat=n)))


def rademacher_ratio(family, probes, p=2.0, signs=None):
    """(E|sum r_j T_j x_j|^p)^(1/p) / (E|sum r_j x_j|^p)^(1/p).

    The expectation runs over every row of ``signs``; by default all 2^n patterns.
    """
    T = _stack(family)
    X = np.asarray(probes, dtype=complex).reshape(T.shape[0], T.shape[1])
    if signs is None:
        signs = _sign_patterns(T.shape[0])
    Y = np.einsum("jab,jb->ja", T, X)
    num = np.mean(np.linalg.norm(signs @ Y, axis=1) ** p)
    den = np.mean(np.linalg.norm(signs @ X, axis=1) ** p)
    if den == 0:
        return 0.0
    return float((num / den) ** (1.0 / p))


def _random_probes(rng, n, d):
    X = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return X / np.linalg.norm(X)


def _safe_pow(x, e):
    if e == 0:
        return np.ones_like(x)
    out = np.zeros_like(x)
    np.power(x, e, out=out, where=x > 0)
    return out


def _ascent(T, X, p, signs, steps=200):
    """Projected gradient ascent of log(ratio) over probe sets on the unit sphere."""

    def value_and_grad(X):
        Y = np.einsum("jab,jb->ja", T, X)
        U = signs @ Y
        V = signs @ X
        nu = np.linalg.norm(U, axis=1)
        nv = np.linalg.norm(V, axis=1)
        F = np.mean(nu**p)
        G = np.mean(nv**p)
        if F == 0 or G == 0:
            return 0.0, np.zeros_like(X)
        # Wirtinger gradients of F and G with respect to conj(X)
        wu = (p / 2) * _safe_pow(nu, p - 2)
        wv = (p / 2) * _safe_pow(nv, p - 2)
        gU = signs.T @ (wu[:, None] * U) / len(signs)
        gF = np.einsum("jba,jb->ja", T.conj(), gU)
        gG = signs.T @ (wv[:, None] * V) / len(signs)
        ratio = (F / G) ** (1 / p)
        return ratio, (gF / F - gG / G) / p

    best, g = value_and_grad(X)
    step = 1.0
    for _ in range(steps):
        if step < 1e-12:
            break
        trial = X + step * g
        trial /= np.linalg.norm(trial)
        val, gt = value_and_grad(trial)
        if val > best:
            X, best, g = trial, val, gt
            step *= 2.0
        else:
            step *= 0.5
    return best, X


def r_bound_estimate(
    family,
    probes=None,
    p: float = 2.0,
    trials: int = DEFAULT_TRIALS,
    method: str = "auto",
    seed: int = 0,
    n_probes: int = DEFAULT_PROBES,
) -> RBoundEstimate:
    """Estimate the R-bound of a finite family of d x d matrices.

    Parameters
    ----------
    family : sequence of (d, d) arrays
    probes : optional (n, d) array or list of such arrays used as starting probes
    p : exponent in the Rademacher averages
    trials : number of random sign patterns (monte-carlo only)
    method : "hilbert-exact", "enumeration", "monte-carlo" or "auto"
        "auto" picks hilbert-exact for p = 2, enumeration for n <= 12,
        monte-carlo otherwise.
    seed : seed for probes and signs; recorded in the result.

    Notes
    -----
    At p = 2 Rademacher orthogonality gives E|sum r_j y_j|^2 = sum |y_j|^2, so the
    optimal constant is max_j ||T_j||_2 exactly. The other two regimes evaluate the
    ratio at concrete probes and therefore only bound the constant from below.
    """
    T = _stack(family)
    n, d = T.shape[0], T.shape[1]
    if method == "auto":
        method = "hilbert-exact" if p == 2 else ("enumeration" if n <= ENUMERATION_MAX else "monte-carlo")

    if method == "hilbert-exact":
        if p != 2:
            raise ValueError("the exact Hilbert-space formula only holds for p = 2")
        norms = [matrix_norm(M) for M in T]
        j = int(np.argmax(norms))
        return RBoundEstimate(float(norms[j]), method, "exact", p=p, argmax=j)

    rng = np.random.default_rng(seed)
    starts = _probe_list(probes, n, d)
    while len(starts) < n_probes:
        starts.append(_random_probes(rng, n, d))

    if method == "enumeration":
        if n > ENUMERATION_MAX:
            raise FamilyTooLargeError(f"enumeration needs n <= {ENUMERATION_MAX}, family has {n}")
        signs = _sign_patterns(n)
        best, arg = -1.0, None
        for X in starts:
            val, Xopt = _ascent(T, X, p, signs)
            if val > best:
                best, arg = val, Xopt
        return RBoundEstimate(best, method, "lower", p=p, probes=len(starts), seed=seed, argmax=arg)

    if method == "monte-carlo":
        best, arg = -1.0, None
        for i, X in enumerate(starts):
            # probe sets beyond the first are restricted to random sub-families
            if i == 0 or n == 1:
                idx = np.arange(n)
            else:
                size = int(rng.integers(1, n + 1))
                idx = np.sort(rng.choice(n, size=size, replace=False))
            signs = rng.choice((-1.0, 1.0), size=(trials, idx.size))
            val = _mc_lower_bound(T[idx], X[idx], p, signs)
            if val > best:
                best, arg = val, (idx, X[idx])
        return RBoundEstimate(
            best, method, f"lower ({MC_SIGMAS:g}-sigma statistical)", p=p, trials=trials, probes=len(starts), seed=seed, argmax=arg
        )

    raise ValueError(f"unknown R-bound method {method!r}")


def _mc_lower_bound(T, X, p, signs, z=MC_SIGMAS):
    """Sampled Rademacher ratio minus z standard errors (delta method), floored at 0.

    The plain ratio of sample means can overshoot the true ratio; subtracting the
    standard error keeps the reported value a lower bound with high probability.
    """
    Y = np.einsum("jab,jb->ja", T, X)
    a = np.linalg.norm(signs @ Y, axis=1) ** p
    b = np.linalg.norm(signs @ X, axis=1) ** p
    mb = b.mean()
    if mb == 0:
        return 0.0
    q = a.mean() / mb
    se = np.std(a - q * b, ddof=1) / (np.sqrt(len(a)) * mb) if len(a) > 1 else q
    return float(max(q - z * se, 0.0) ** (1.0 / p))


def _probe_list(probes, n, d):
    if probes is None:
        return []
    P = np.asarray(probes, dtype=complex)
    if P.ndim == 2:
        P = P[None]
    if P.shape[1:] != (n, d):
        raise DimensionError(f"probe sets must have shape ({n}, {d}), got {P.shape[1:]}")
    return [X / np.linalg.norm(X) if np.linalg.norm(X) > 0 else X for X in P]


# -- decay of the resolvent -------------------------------------------------


@dataclass
class DecayFit:
    window: tuple
    per_mode: dict
    c_hat: float
    argmax: int
    sup_symbol_norm: float
    near_singular: list

    def to_dict(self):
        return {
            "window": list(self.window),
            "c_hat": self.c_hat,
            "argmax": self.argmax,
            "sup_symbol_norm": self.sup_symbol_norm,
            "near_singular": self.near_singular,
            "per_mode": [[k, v] for k, v in sorted(self.per_mode.items())],
        }


def decay_estimate(A: LinearOperator, window) -> DecayFit:
    """Per-mode values (1 + |k|^3) ||Delta_k^{-1}||_2 and their maximum.

    The family of these values is bounded exactly when ||Delta_k^{-1}|| <= c/(1+|k|^3).
    Also returns sup_k ||M_k||_2 over the same window.
    """
    lo, hi = window
    per_mode, sup_m, near = {}, 0.0, []
    for k in range(lo, hi + 1):
        lam = shift_for_mode(k)
        R = _resolvent(A, k)
        rn = matrix_norm(R)
        per_mode[k] = (1.0 + abs(k) ** 3) * rn
        sup_m = max(sup_m, abs(lam) * rn)
        if A.sigma_min(lam) < NEAR_SINGULAR_RTOL * (abs(lam) + A.norm_inf()):
            near.append(k)
    kmax = max(per_mode, key=lambda k: (per_mode[k], -abs(k)))
    return DecayFit((lo, hi), per_mode, per_mode[kmax], kmax, sup_m, near)

