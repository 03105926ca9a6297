"""Combined well-posedness diagnosis of an operator over a mode window."""

from __future__ import annotations

from .errors import SingularShiftError
from .multiplier import (
    DEFAULT_PROBES,
    DEFAULT_TRIALS,
    decay_estimate,
    r_bound_estimate,
    symbol_family,
    telescoping_check,
)
from .operators import LinearOperator
from .solver import spectrum_gate

__all__ = ["diagnose"]


def diagnose(
    A: LinearOperator,
    window=(-50, 50),
    seed: int = 0,
    trials: int = DEFAULT_TRIALS,
    n_probes: int = DEFAULT_PROBES,
) -> dict:
    """Gate, symbol norms, telescoping differences, R-bound and decay fit as one dict.

    If the gate finds singular modes the symbol-based fields are ``None``:
    the family M_k is undefined there.
    """
    lo, hi = window
    gate = spectrum_gate(A, window)
    report = {
        "window": [lo, hi],
        "sigma_Z": list(gate.singular_modes),
        "gate": gate.to_dict(margins=False),
        "sup_symbol_norm": None,
        "telescoping_max_dev": None,
        "telescoping_sup_difference": None,
        "r_bound": None,
        "r_bound_mc": None,
        "decay": None,
    }
    if not gate.well_posed:
        return report

    family = symbol_family(A, window)
    mats = family.matrices()
    report["sup_symbol_norm"] = family.sup_norm()

    try:
        tele = telescoping_check(A, window)
        report["telescoping_max_dev"] = tele.max_deviation
        report["telescoping_sup_difference"] = tele.sup_difference_norm
    except SingularShiftError:
        # M_{hi+1} sits on a singular mode just outside the window
        pass

    exact = r_bound_estimate(mats, method="hilbert-exact")
    report["r_bound"] = {"value": exact.value, "method": exact.method, "seed": seed}
    mc = r_bound_estimate(mats, method="monte-carlo", trials=trials, seed=seed, n_probes=n_probes)
    report["r_bound_mc"] = mc.to_dict()

    decay = decay_estimate(A, window)
    report["decay"] = {
        "c_hat": decay.c_hat,
        "argmax": decay.argmax,
        "near_singular": decay.near_singular,
        "per_mode": [decay.per_mode[k] for k in range(lo, hi + 1)],
    }
    return report
