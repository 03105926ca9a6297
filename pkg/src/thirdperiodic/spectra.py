"""
Vector-valued Fourier analysis on the time circle [0, 2*pi).

Signals are stored as an (N, d) complex array of samples at t_j = 2*pi*j/N.
Coefficients are stored as a (2K+1, d) array whose row ``k + K`` holds the
coefficient of e^{ikt}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OrderError, WindowError

__all__ = [
    "PeriodicSignal",
    "SpectralCoefficients",
    "dft",
    "synthesize",
    "fejer_weights",
    "fejer_sum",
    "spectral_derivative",
    "derivative_symbol",
    "default_order",
]


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PeriodicSignal:
    """Uniform samples of a 2*pi-periodic function with values in C^d."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2 or s.shape[0] < 1 or s.shape[1] < 1:
            raise ValueError(f"samples must have shape (N, d) with N, d >= 1, got {s.shape}")
        object.__setattr__(self, "samples", _frozen(s))

    @property
    def N(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.N) / self.N

    @property
    def is_real(self) -> bool:
        return not np.any(self.samples.imag)

    @classmethod
    def from_function(cls, func, N: int) -> PeriodicSignal:
        """Sample ``func(t)`` (returning a length-d vector or scalar) on the uniform grid."""
        t = 2 * np.pi * np.arange(N) / N
        return cls(np.array([np.atleast_1d(func(tj)) for tj in t], dtype=complex))

    def l2_norm(self) -> float:
        """Discrete L2 norm, (1/N) sum_j |f(t_j)|^2 under the square root."""
        return float(np.sqrt(np.mean(np.sum(np.abs(self.samples) ** 2, axis=1))))

    def sup_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.samples, axis=1)))

    def __add__(self, other):
        return PeriodicSignal(self.samples + other.samples)

    def __sub__(self, other):
        return PeriodicSignal(self.samples - other.samples)

    def __mul__(self, alpha):
        return PeriodicSignal(alpha * self.samples)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class SpectralCoefficients:
    """Fourier coefficients for modes k = -K..K; ``coeffs[k + K]`` is the k-th one."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2 or c.shape[0] % 2 != 1:
            raise ValueError(f"coeffs must have shape (2K+1, d), got {c.shape}")
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def K(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def d(self) -> int:
        return self.coeffs.shape[1]

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def __getitem__(self, k: int) -> np.ndarray:
        if abs(k) > self.K:
            return np.zeros(self.d, dtype=complex)
        return self.coeffs[k + self.K]

    @classmethod
    def zeros(cls, K: int, d: int) -> SpectralCoefficients:
        return cls(np.zeros((2 * K + 1, d), dtype=complex))

    @classmethod
    def from_modes(cls, K: int, d: int, entries: dict) -> SpectralCoefficients:
        """Build from a sparse ``{k: vector}`` mapping; missing modes are zero."""
        c = np.zeros((2 * K + 1, d), dtype=complex)
        for k, v in entries.items():
            if abs(k) > K:
                raise WindowError(f"mode {k} outside window [-{K}, {K}]")
            c[k + K] = v
        return cls(c)


def default_order(N: int) -> int:
    return (N - 1) // 2


def dft(f: PeriodicSignal, K: int | None = None) -> SpectralCoefficients:
    """Rectangle-rule Fourier coefficients (1/N) sum_j e^{-ik t_j} f(t_j) for |k| <= K.

    Exact for trigonometric polynomials of degree <= K when 2K+1 <= N.
    """
    if K is None:
        K = default_order(f.N)
    if K < 0 or 2 * K + 1 > f.N:
        raise WindowError(f"window 2K+1 = {2 * K + 1} exceeds sample count N = {f.N}")
    full = np.fft.fft(f.samples, axis=0) / f.N
    # mode k sits at index k mod N; 2K+1 <= N keeps the indices distinct
    return SpectralCoefficients(full[np.arange(-K, K + 1) % f.N])


def synthesize(c: SpectralCoefficients, N: int) -> PeriodicSignal:
    """Evaluate the partial sum sum_{|k|<=K} e^{ikt} c_k on N grid points."""
    if 2 * c.K + 1 > N:
        raise WindowError(f"N = {N} is too small for order K = {c.K}")
    full = np.zeros((N, c.d), dtype=complex)
    full[c.modes % N] = c.coeffs
    return PeriodicSignal(np.fft.ifft(full, axis=0) * N)


def fejer_weights(n: int) -> np.ndarray:
    """Cesaro weights 1 - |k|/(n+1) for k = -n..n."""
    k = np.arange(-n, n + 1)
    return 1.0 - np.abs(k) / (n + 1)


def fejer_sum(c: SpectralCoefficients, n: int, N: int) -> PeriodicSignal:
    """Samples of the n-th Fejer mean, the average of partial sums of order 0..n."""
    if n < 0 or n > c.K:
        raise OrderError(f"Cesaro order n = {n} must lie in [0, K = {c.K}]")
    lo = c.K - n
    weighted = c.coeffs[lo:lo + 2 * n + 1] * fejer_weights(n)[:, None]
    return synthesize(SpectralCoefficients(weighted), N)


def derivative_symbol(modes, m: int) -> np.ndarray:
    """(ik)^m for m in {1, 2, 3}, written out so the values are exact."""
    k = np.asarray(modes, dtype=float)
    if m == 1:
        return 1j * k
    if m == 2:
        return -(k**2) + 0j
    if m == 3:
        return -1j * k**3
    raise OrderError(f"derivative order must be 1, 2 or 3, got {m}")


def spectral_derivative(c: SpectralCoefficients, m: int) -> SpectralCoefficients:
    return SpectralCoefficients(c.coeffs * derivative_symbol(c.modes, m)[:, None])
