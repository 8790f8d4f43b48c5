"""Rényi and Tsallis entropies of finite distributions (in nats).

Zero-probability outcomes contribute nothing (0 ln 0 = 0). Order ``alpha = 1``
always goes through the exact Shannon formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tolerances import TOL


class ProbabilityDistribution:
    """Nonnegative vector summing to one.

    Entries in ``[-TOL["prob_clamp"], 0)`` are clamped to zero and the vector
    renormalised; anything more negative, or a sum off by more than
    ``TOL["prob_sum"]``, raises ``ValueError``.
    """

    __slots__ = ("probs",)

    def __init__(self, probs):
        p = np.array(probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("empty distribution")
        if not np.all(np.isfinite(p)):
            raise ValueError("distribution has non-finite entries")
        if p.min() < -TOL["prob_clamp"]:
            raise ValueError(f"negative probability {p.min():.3e}")
        total = p.sum()
        if abs(total - 1.0) > TOL["prob_sum"]:
            raise ValueError(f"probabilities sum to {total:.15g}, not 1")
        if p.min() < 0.0:
            p = np.clip(p, 0.0, None)
            p /= p.sum()
        p.setflags(write=False)
        self.probs = p

    def __len__(self):
        return self.probs.size

    def __iter__(self):
        return iter(self.probs)

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __repr__(self):
        return f"ProbabilityDistribution({self.probs.tolist()})"


def _probs(p) -> np.ndarray:
    if isinstance(p, ProbabilityDistribution):
        return p.probs
    return ProbabilityDistribution(p).probs


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise ValueError(f"entropy order must be positive, got {alpha!r}")


def shannon_entropy(p) -> float:
    q = _probs(p)
    q = q[q > 0]
    return float(-np.sum(q * np.log(q)))


def renyi_entropy(p, alpha: float) -> float:
    """Rényi entropy; ``alpha`` may be ``math.inf`` for the min-entropy."""
    _check_alpha(alpha)
    q = _probs(p)
    if alpha == 1:
        return shannon_entropy(q)
    if math.isinf(alpha):
        return float(-np.log(q.max()))
    q = q[q > 0]
    return float(np.log(np.sum(q**alpha)) / (1.0 - alpha))


def collision_entropy(p) -> float:
    return renyi_entropy(p, 2.0)


def min_entropy(p) -> float:
    return renyi_entropy(p, math.inf)


def alpha_log(x: float, alpha: float) -> float:
    """The deformed logarithm (x**(1-alpha) - 1) / (1 - alpha); ln x at alpha=1."""
    _check_alpha(alpha)
    if not x > 0:
        raise ValueError(f"alpha-logarithm needs x > 0, got {x!r}")
    if alpha == 1:
        return math.log(x)
    return (x ** (1.0 - alpha) - 1.0) / (1.0 - alpha)


def tsallis_entropy(p, alpha: float) -> float:
    _check_alpha(alpha)
    if math.isinf(alpha):
        raise ValueError("Tsallis entropy needs a finite order")
    q = _probs(p)
    if alpha == 1:
        return shannon_entropy(q)
    q = q[q > 0]
    return float((np.sum(q**alpha) - 1.0) / (1.0 - alpha))


def tsallis_entropy_lnform(p, alpha: float) -> float:
    """Tsallis entropy as sum_n p_n ln_alpha(1/p_n); equal to tsallis_entropy."""
    q = _probs(p)
    return float(sum(pn * alpha_log(1.0 / pn, alpha) for pn in q if pn > 0))


def binary_tsallis(eta: float, alpha: float) -> float:
    """h_alpha(eta) = -eta^a ln_a(eta) - (1-eta)^a ln_a(1-eta)."""
    _check_alpha(alpha)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    total = 0.0
    for x in (eta, 1.0 - eta):
        if x <= 0:
            continue
        # x^a ln_a(x) = (x - x^a) / (1 - a); avoids x^(1-a) overflow at tiny x
        if alpha == 1:
            total -= x * math.log(x)
        else:
            total -= (x - x**alpha) / (1.0 - alpha)
    return total


@dataclass(frozen=True)
class DistortedDistribution:
    """Outcome statistics of an inefficient detector.

    ``extended`` is ``(eta*p_1, ..., eta*p_d, 1 - eta)``; the last slot is the
    no-click event.
    """

    eta: float
    base: ProbabilityDistribution
    extended: ProbabilityDistribution


def distort(p, eta: float) -> DistortedDistribution:
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    base = p if isinstance(p, ProbabilityDistribution) else ProbabilityDistribution(p)
    ext = np.append(eta * base.probs, 1.0 - eta)
    return DistortedDistribution(eta, base, ProbabilityDistribution(ext))


def renyi_interpolation_bound(r2: float, rinf: float, alpha: float) -> float:
    """Lower bound on R_alpha (alpha >= 2) from the collision and min-entropies.

    R_alpha >= R_2 / (alpha - 1) + (alpha - 2) / (alpha - 1) * R_inf
    """
    if not alpha >= 2:
        raise ValueError(f"interpolation bound needs alpha >= 2, got {alpha!r}")
    slack = 1e-12 * max(1.0, abs(r2))
    if not (rinf - slack <= r2 <= 2.0 * rinf + slack):
        raise ValueError(f"inconsistent entropies: need R_inf <= R_2 <= 2 R_inf, got {r2}, {rinf}")
    if math.isinf(alpha):
        return rinf
    return r2 / (alpha - 1.0) + (alpha - 2.0) / (alpha - 1.0) * rinf


def collision_only_bound(r2: float, alpha: float) -> float:
    """The weaker bound R_alpha >= alpha / (2 (alpha - 1)) R_2 for alpha >= 2."""
    if not alpha >= 2:
        raise ValueError(f"bound needs alpha >= 2, got {alpha!r}")
    if math.isinf(alpha):
        return 0.5 * r2
    return alpha / (2.0 * (alpha - 1.0)) * r2
