"""Named test forcings, e.g. ``cos(3)`` or ``noise(7, 3)``."""

from __future__ import annotations

import re

import numpy as np

from .spectra import PeriodicSignal, SpectralCoefficients, synthesize

__all__ = ["forcing_catalog", "parse_forcing_name", "CATALOG"]

CATALOG = ("zero", "const", "cos", "mode", "sinx-cos", "noise")

_NAME_RE = re.compile(r"^\s*([a-z][a-z\-]*)\s*(?:\((.*)\))?\s*$")


def parse_forcing_name(text: str):
    """Split ``name(p1, p2)`` into ``("name", [p1, p2])`` with numeric params."""
    m = _NAME_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse forcing {text!r}")
    name, args = m.group(1), m.group(2)
    params = []
    if args is not None and args.strip():
        for a in args.split(","):
            a = a.strip()
            try:
                params.append(int(a))
            except ValueError:
                try:
                    params.append(float(a))
                except ValueError:
                    raise ValueError(f"bad forcing parameter {a!r} in {text!r}") from None
    return name, params


def _int_param(name, params, i, default=None):
    if len(params) <= i:
        if default is None:
            raise ValueError(f"forcing {name!r} needs parameter #{i + 1}")
        return default
    p = params[i]
    if not isinstance(p, int):
        raise ValueError(f"forcing {name!r} parameter #{i + 1} must be an integer, got {p!r}")
    return p


def forcing_catalog(name: str, params=(), N: int = 32, d: int = 1, v=None) -> PeriodicSignal:
    """Sample a catalog forcing on N points with values in C^d.

    ``zero``; ``const(c)``; ``cos(m)`` = cos(mt) v; ``mode(k)`` = e^{ikt} v;
    ``sinx-cos(m)`` = cos(mt) sin(x) on the interior grid x_i = i*pi/(d+1);
    ``noise(seed, degree)`` = real random trigonometric polynomial.
    The direction v defaults to the all-ones vector.
    """
    params = list(params)
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    v = np.ones(d) if v is None else np.asarray(v, dtype=complex)
    t = 2 * np.pi * np.arange(N) / N
    if name == "zero":
        return PeriodicSignal(np.zeros((N, d)))
    if name == "const":
        if len(params) != 1:
            raise ValueError("const needs exactly one value, e.g. const(2.5)")
        return PeriodicSignal(np.full((N, d), float(params[0])) * v)
    if name == "cos":
        m = _int_param(name, params, 0, 1)
        return PeriodicSignal(np.cos(m * t)[:, None] * v)
    if name == "mode":
        k = _int_param(name, params, 0, 1)
        return PeriodicSignal(np.exp(1j * k * t)[:, None] * v)
    if name == "sinx-cos":
        m = _int_param(name, params, 0, 1)
        x = np.arange(1, d + 1) * np.pi / (d + 1)
        return PeriodicSignal(np.cos(m * t)[:, None] * np.sin(x)[None, :])
    if name == "noise":
        seed = _int_param(name, params, 0, 0)
        degree = _int_param(name, params, 1, 3)
        if 2 * degree + 1 > N:
            raise ValueError(f"noise degree {degree} needs N >= {2 * degree + 1}")
        rng = np.random.default_rng(seed)
        pos = rng.standard_normal((degree + 1, d)) + 1j * rng.standard_normal((degree + 1, d))
        pos[0] = pos[0].real
        c = np.concatenate([pos[:0:-1].conj(), pos])
        return PeriodicSignal(synthesize(SpectralCoefficients(c), N).samples.real)
    raise ValueError(f"unknown forcing {name!r}; choose from {', '.join(CATALOG)}")
