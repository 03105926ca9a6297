"""
Finite-dimensional realizations of the operator A.

Every handle supports ``apply`` and ``shifted_solve(lam, b)``, which returns
x = (lam*I - A)^{-1} b. Matrix-backed kinds also expose their spectrum.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionError, SchemaError, SingularShiftError, UnsupportedOperatorError

__all__ = [
    "LinearOperator",
    "SpectrumReport",
    "dense_operator",
    "tridiagonal_operator",
    "diagonal_operator",
    "scalar_operator",
    "dirichlet_laplacian",
    "apply",
    "shifted_solve",
    "spectrum",
    "operator_from_spec",
    "operator_to_spec",
    "SINGULAR_RTOL",
]

KINDS = ("dense", "tridiagonal", "diagonal", "scalar", "opaque")

# lam*I - A counts as singular when sigma_min <= SINGULAR_RTOL * (|lam| + ||A||_inf)
SINGULAR_RTOL = 1e-10


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    method: str
    max_residual: float | None = None

    def to_dict(self):
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "method": self.method,
            "max_residual": self.max_residual,
        }


class LinearOperator:
    """Immutable handle for a linear operator on C^dim.

    Use the module-level constructors (``dense_operator``, ``dirichlet_laplacian``, ...)
    rather than calling this directly.
    """

    def __init__(self, kind, dim, data, name=None):
        if kind not in KINDS:
            raise ValueError(f"unknown operator kind {kind!r}")
        if dim < 1:
            raise ValueError("operator dimension must be >= 1")
        self.kind = kind
        self.dim = int(dim)
        self.name = name or kind
        self._data = data
        self._cache = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"LinearOperator(kind={self.kind!r}, dim={self.dim}, name={self.name!r})"

    @property
    def data(self):
        return self._data

    # -- basic structure -------------------------------------------------

    def to_dense(self) -> np.ndarray:
        if self.kind == "dense":
            return self._data.copy()
        if self.kind == "diagonal":
            return np.diag(self._data)
        if self.kind == "scalar":
            return self._data * np.eye(self.dim, dtype=complex)
        if self.kind == "tridiagonal":
            lower, diag, upper = self._data
            return np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
        return self._memo("dense", lambda: self._apply_fn(np.eye(self.dim, dtype=complex)))

    @property
    def is_matrix_backed(self) -> bool:
        return self.kind != "opaque"

    @property
    def is_real(self) -> bool:
        if self.kind == "opaque":
            return False
        if self.kind == "tridiagonal":
            return not any(np.any(np.asarray(p).imag) for p in self._data)
        return not np.any(np.asarray(self._data).imag)

    @property
    def is_hermitian(self) -> bool:
        if self.kind in ("diagonal", "scalar"):
            return not np.any(np.asarray(self._data).imag)
        if self.kind == "tridiagonal":
            lower, diag, upper = self._data
            return not np.any(diag.imag) and np.array_equal(upper, lower.conj())
        M = self.to_dense()
        return bool(np.array_equal(M, M.conj().T))

    def norm_inf(self) -> float:
        """Max absolute row sum."""
        return self._memo("norm_inf", lambda: float(np.max(np.sum(np.abs(self.to_dense()), axis=1))))

    def norm2(self) -> float:
        return self._memo("norm2", lambda: float(np.linalg.norm(self.to_dense(), 2)))

    # -- action ----------------------------------------------------------

    def apply(self, x) -> np.ndarray:
        """Return A @ x for a vector x of length dim, or a (dim, m) block of columns."""
        x = self._check(x)
        if self.kind == "dense":
            return self._data @ x
        if self.kind == "scalar":
            return self._data * x
        if self.kind == "diagonal":
            return self._data.reshape((-1,) + (1,) * (x.ndim - 1)) * x
        if self.kind == "tridiagonal":
            lower, diag, upper = self._data
            shape = (-1,) + (1,) * (x.ndim - 1)
            y = diag.reshape(shape) * x
            y[1:] += lower.reshape(shape) * x[:-1]
            y[:-1] += upper.reshape(shape) * x[1:]
            return y
        return np.asarray(self._apply_fn(x), dtype=complex)

    def apply_rows(self, X) -> np.ndarray:
        """Apply A to every row of an (N, dim) array of state vectors."""
        X = np.asarray(X, dtype=complex)
        return self.apply(X.T).T

    def sigma_min(self, lam) -> float:
        """Smallest singular value of lam*I - A."""
        lam = complex(lam)
        if self.kind in ("diagonal", "scalar"):
            return float(np.min(np.abs(lam - np.atleast_1d(self._data))))
        if self.kind == "tridiagonal" and self.is_hermitian:
            # normal matrix: singular values of lam - A are |lam - mu|
            mu = self._hermitian_tri_eigvals()
            return float(np.min(np.abs(lam - mu)))
        return self._factor(lam)[1]

    def singular_tolerance(self, lam) -> float:
        return SINGULAR_RTOL * (abs(complex(lam)) + self.norm_inf())

    def is_singular_shift(self, lam) -> bool:
        return self.sigma_min(lam) <= self.singular_tolerance(lam)

    def shifted_solve(self, lam, b) -> np.ndarray:
        """Solve (lam*I - A) x = b.

        Raises
        ------
        SingularShiftError
            If lam*I - A is numerically singular; carries lam and sigma_min.
        """
        lam = complex(lam)
        b = self._check(b)
        smin = self.sigma_min(lam)
        if smin <= self.singular_tolerance(lam):
            raise SingularShiftError(lam, smin)
        if self.kind in ("diagonal", "scalar"):
            shape = (-1,) + (1,) * (b.ndim - 1)
            den = lam - np.broadcast_to(self._data, (self.dim,))
            return b / den.reshape(shape)
        if self.kind == "tridiagonal":
            lower, diag, upper = self._data
            ab = np.zeros((3, self.dim), dtype=complex)
            ab[0, 1:] = -upper
            ab[1] = lam - diag
            ab[2, :-1] = -lower
            return scipy.linalg.solve_banded((1, 1), ab, b, check_finite=False)
        lu = self._factor(lam)[0]
        return scipy.linalg.lu_solve(lu, b, check_finite=False)

    def spectrum(self) -> SpectrumReport:
        if self.kind == "opaque":
            raise UnsupportedOperatorError("spectrum is only available for matrix-backed operators")
        if self.kind == "diagonal":
            return SpectrumReport(self._data.copy(), "diagonal", 0.0)
        if self.kind == "scalar":
            return SpectrumReport(np.full(self.dim, self._data, dtype=complex), "scalar", 0.0)
        M = self.to_dense()
        if self.kind == "tridiagonal" and self.is_hermitian and self.is_real:
            lower, diag, _ = self._data
            w, V = scipy.linalg.eigh_tridiagonal(diag.real, lower.real)
            method = "eigh_tridiagonal"
        elif self.is_hermitian:
            w, V = np.linalg.eigh(M)
            method = "eigh"
        else:
            w, V = np.linalg.eig(M)
            method = "eig"
        w = np.asarray(w, dtype=complex)
        res = np.linalg.norm(M @ V - V * w, axis=0) / np.linalg.norm(V, axis=0)
        return SpectrumReport(w, method, float(np.max(res)))

    # -- internals -------------------------------------------------------

    def _check(self, x):
        x = np.asarray(x, dtype=complex)
        if x.shape[:1] != (self.dim,):
            raise DimensionError(f"expected leading dimension {self.dim}, got shape {x.shape}")
        return x

    def _memo(self, key, compute):
        try:
            return self._cache[key]
        except KeyError:
            pass
        value = compute()
        with self._lock:
            return self._cache.setdefault(key, value)

    def _hermitian_tri_eigvals(self):
        def compute():
            lower, diag, _ = self._data
            if self.is_real:
                return scipy.linalg.eigvalsh_tridiagonal(diag.real, lower.real)
            return np.linalg.eigvalsh(self.to_dense())

        return self._memo("eigvalsh", compute)

    def _factor(self, lam):
        # LU of lam*I - A and its smallest singular value, cached per shift
        def compute():
            S = lam * np.eye(self.dim, dtype=complex) - self.to_dense()
            smin = float(scipy.linalg.svdvals(S, check_finite=False).min())
            return scipy.linalg.lu_factor(S, check_finite=False), smin

        return self._memo(("lu", lam), compute)

    @classmethod
    def opaque(cls, dim, apply_fn, name=None):
        op = cls("opaque", dim, None, name=name)
        op._apply_fn = apply_fn
        return op


def dense_operator(matrix, name=None) -> LinearOperator:
    M = np.array(matrix, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"dense operator needs a square matrix, got shape {M.shape}")
    M.setflags(write=False)
    return LinearOperator("dense", M.shape[0], M, name=name)


def tridiagonal_operator(lower, diag, upper, name=None) -> LinearOperator:
    diag = np.array(diag, dtype=complex).ravel()
    lower = np.array(lower, dtype=complex).ravel()
    upper = np.array(upper, dtype=complex).ravel()
    n = diag.size
    if n < 1 or lower.size != n - 1 or upper.size != n - 1:
        raise DimensionError("tridiagonal operator needs len(lower) == len(upper) == len(diag) - 1")
    for a in (lower, diag, upper):
        a.setflags(write=False)
    return LinearOperator("tridiagonal", n, (lower, diag, upper), name=name)


def diagonal_operator(entries, name=None) -> LinearOperator:
    e = np.array(entries, dtype=complex).ravel()
    if e.size == 0:
        raise DimensionError("diagonal operator needs at least one entry")
    e.setflags(write=False)
    return LinearOperator("diagonal", e.size, e, name=name)


def scalar_operator(a, dim=1, name=None) -> LinearOperator:
    """The operator a*I on C^dim."""
    return LinearOperator("scalar", dim, complex(a), name=name)


def dirichlet_laplacian(n: int) -> LinearOperator:
    """Second-difference approximation of y'' on [0, pi] with y(0) = y(pi) = 0.

    Uses n interior points and spacing h = pi/(n+1); eigenvalues are
    -(4/h^2) sin^2(j h/2), j = 1..n.
    """
    if n < 1:
        raise ValueError("need at least one interior point")
    h = np.pi / (n + 1)
    off = np.full(n - 1, 1.0 / h**2)
    return tridiagonal_operator(off, np.full(n, -2.0 / h**2), off, name=f"dirichlet_laplacian(n={n})")


def apply(A: LinearOperator, x):
    return A.apply(x)


def shifted_solve(A: LinearOperator, lam, b):
    return A.shifted_solve(lam, b)


def spectrum(A: LinearOperator) -> SpectrumReport:
    return A.spectrum()


# -- JSON schema ---------------------------------------------------------


def _cplx(v):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise SchemaError(f"complex entries are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    raise SchemaError(f"bad numeric entry {v!r}")


def _cvec(vs):
    if not isinstance(vs, list):
        raise SchemaError("expected a list of entries")
    return np.array([_cplx(v) for v in vs], dtype=complex)


def operator_from_spec(spec: dict) -> LinearOperator:
    """Build an operator from the JSON schema

    ``{"kind": "dense|tridiagonal|diagonal|scalar|dirichlet_laplacian", "dim": int,
    "entries": [...], "n": int}`` with complex numbers as ``[re, im]`` pairs.
    Dense entries are a list of rows; tridiagonal entries are ``[lower, diag, upper]``.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SchemaError("operator spec must be an object with a 'kind' field")
    kind = spec["kind"]
    try:
        if kind == "dirichlet_laplacian":
            n = spec.get("n", spec.get("dim"))
            if not isinstance(n, int) or n < 1:
                raise SchemaError("dirichlet_laplacian needs a positive integer 'n'")
            return dirichlet_laplacian(n)
        entries = spec.get("entries")
        if entries is None:
            raise SchemaError(f"operator kind {kind!r} needs 'entries'")
        if kind == "dense":
            if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
                raise SchemaError("dense entries must be a list of rows")
            A = dense_operator(np.array([_cvec(r) for r in entries]))
        elif kind == "tridiagonal":
            if not isinstance(entries, list) or len(entries) != 3:
                raise SchemaError("tridiagonal entries must be [lower, diag, upper]")
            A = tridiagonal_operator(*(_cvec(e) for e in entries))
        elif kind == "diagonal":
            A = diagonal_operator(_cvec(entries))
        elif kind == "scalar":
            vals = _cvec(entries) if isinstance(entries, list) and (
                not entries or isinstance(entries[0], (list, tuple))
            ) else np.array([_cplx(entries)])
            if vals.size != 1:
                raise SchemaError("scalar entries must hold exactly one value")
            A = scalar_operator(vals[0], dim=int(spec.get("dim", 1)))
        else:
            raise SchemaError(f"unknown operator kind {kind!r}")
    except (DimensionError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from exc
    if "dim" in spec and spec["dim"] != A.dim:
        raise SchemaError(f"declared dim {spec['dim']} does not match entries (dim {A.dim})")
    return A


def operator_to_spec(A: LinearOperator) -> dict:
    def pair(z):
        return [float(z.real), float(z.imag)]

    if A.kind == "dense":
        entries = [[pair(z) for z in row] for row in A.data]
    elif A.kind == "tridiagonal":
        entries = [[pair(z) for z in part] for part in A.data]
    elif A.kind == "diagonal":
        entries = [pair(z) for z in A.data]
    elif A.kind == "scalar":
        entries = [pair(A.data)]
    else:
        raise UnsupportedOperatorError("opaque operators have no JSON form")
    return {"kind": A.kind, "dim": A.dim, "entries": entries}
