"""Numerical tolerances used across the package.

All thresholds live in the single mutable mapping :data:`TOL`. The CLI
``--tolerance KEY=VALUE`` flag writes into it; library code always reads
it at call time, never at import time.
"""

from __future__ import annotations

TOL: dict[str, float] = {
    # imaginary residue allowed when taking Tr(AB) of Hermitian operators
    "hs_imag": 1e-12,
    # Hermiticity: drift symmetrised away silently up to this max-norm
    "hermitian_reject": 1e-8,
    # Jacobi: stop when off-diagonal Frobenius mass falls below this
    "jacobi_offdiag": 1e-13,
    "jacobi_max_sweeps": 100,
    # density-matrix / distribution checks
    "trace": 1e-10,
    "psd": 1e-9,
    "prob_sum": 1e-10,
    # negative probabilities in [-prob_clamp, 0) are clamped to zero
    "prob_clamp": 1e-10,
    # MUM axiom residuals
    "mum_axiom": 1e-8,
    # bound checks: observed may undershoot the bound by this much
    "bound": 1e-9,
    # guard band for strict-violation certificates
    "guard": 1e-9,
}

DEFAULTS: dict[str, float] = dict(TOL)


def get(key: str) -> float:
    return TOL[key]


def override(key: str, value: float) -> None:
    """Set one tolerance, rejecting unknown keys."""
    if key not in TOL:
        raise KeyError(f"unknown tolerance {key!r}; known: {sorted(TOL)}")
    TOL[key] = type(DEFAULTS[key])(value)


def reset() -> None:
    TOL.clear()
    TOL.update(DEFAULTS)
