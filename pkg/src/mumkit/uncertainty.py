"""Indices of coincidence and entropic uncertainty bounds for MUM sets.

Every bound is a function of ``(M, d, kappa, purity)`` only. The
``verify_*`` drivers measure a concrete state with a concrete MUM set and
compare against the bound, with purity always recomputed from the matrix.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .entropy import (
    ProbabilityDistribution,
    alpha_log,
    binary_tsallis,
    distort,
    renyi_entropy,
    tsallis_entropy,
)
from .linalg import as_matrix
from .mum import MumSet, all_probabilities
from .states import purity as state_purity
from .tolerances import TOL

FAMILIES = ("renyi", "tsallis", "shannon", "tsallis_inefficiency")
RENYI_ALPHAS = (2.0, 2.5, 3.0, 5.0, 10.0, math.inf)
TSALLIS_ALPHAS = (0.5, 1.0, 1.5, 2.0)

# range checks on kappa and purity tolerate this much round-off
_RANGE_SLACK = 1e-9


@dataclass(frozen=True)
class CoincidenceReport:
    per_measurement: tuple[float, ...]
    total: float
    bound: float
    is_complete_set: bool
    margin: float
    purity: float
    d: int = 0
    M: int = 0
    kappa: float = float("nan")
    provenance: str = ""

    @property
    def satisfied(self) -> bool:
        if self.margin < -TOL["bound"]:
            return False
        return not self.is_complete_set or abs(self.margin) <= TOL["mum_axiom"]

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["per_measurement"] = list(self.per_measurement)
        doc["record"] = "coincidence"
        doc["satisfied"] = self.satisfied
        return doc


@dataclass(frozen=True)
class BoundReport:
    family: str
    alpha: float
    M: int
    d: int
    kappa: float
    purity: float
    eta: float | None
    bound_value: float
    observed_average_entropy: float
    satisfied: bool
    provenance: str = ""

    @property
    def margin(self) -> float:
        return self.observed_average_entropy - self.bound_value

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["record"] = "bound"
        doc["margin"] = self.margin
        if math.isinf(self.alpha):
            doc["alpha"] = "inf"
        return doc


def _check_params(M: int, d: int, kappa: float, purity: float) -> float:
    """Validate the common bound arguments; returns purity clipped into [1/d, 1]."""
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    if int(M) != M or not 1 <= M <= d + 1:
        raise ValueError(f"M must be in 1..{d + 1}, got {M!r}")
    if not 1.0 / d - _RANGE_SLACK <= kappa <= 1.0 + _RANGE_SLACK:
        raise ValueError(f"kappa must be in [1/d, 1], got {kappa!r}")
    if not 1.0 / d - _RANGE_SLACK <= purity <= 1.0 + _RANGE_SLACK:
        raise ValueError(f"purity must be in [1/d, 1], got {purity!r}")
    return min(max(purity, 1.0 / d), 1.0)


def _kd(kappa: float, d: int, excess: float | None = None) -> float:
    """kappa d - 1; from ``excess`` = kappa - 1/d when given, which keeps
    precision for kappa within rounding of 1/d."""
    if excess is not None:
        return max(excess * d, 0.0)
    return max(kappa * d - 1.0, 0.0)


def index_of_coincidence(p) -> float:
    q = p.probs if isinstance(p, ProbabilityDistribution) else ProbabilityDistribution(p).probs
    return float(np.sum(q * q))


def coincidence_sum_bound(M: int, d: int, kappa: float, purity: float, *,
                          kappa_excess: float | None = None) -> float:
    """Upper bound on sum_b C(P^(b)|rho); exact when M = d + 1.

    Equal to (M-1)/d + [1 - kappa + (kappa d - 1) purity] / (d - 1).
    ``kappa_excess`` (kappa - 1/d), when given, replaces the rounded
    ``kappa d - 1`` in this and every other bound below.
    """
    purity = _check_params(M, d, kappa, purity)
    return float(M / d + _kd(kappa, d, kappa_excess) * (purity * d - 1.0) / (d * (d - 1)))


def average_coincidence_bound(M: int, d: int, kappa: float, purity: float, *,
                              kappa_excess: float | None = None) -> float:
    """Bound on the mean index of coincidence: [M(d-1) + (kd-1)(pd-1)] / (Md(d-1))."""
    purity = _check_params(M, d, kappa, purity)
    kd = _kd(kappa, d, kappa_excess)
    return (M * (d - 1) + kd * (purity * d - 1.0)) / (M * d * (d - 1))


def verify_coincidence(mums: MumSet, rho, provenance: str = "") -> CoincidenceReport:
    R = as_matrix(rho)
    probs = all_probabilities(mums, R)
    per = tuple(float(np.sum(row * row)) for row in probs)
    total = float(sum(per))
    pur = state_purity(R)
    bound = coincidence_sum_bound(mums.M, mums.dim, mums.kappa, pur,
                                  kappa_excess=mums.kappa_excess)
    return CoincidenceReport(per, total, bound, mums.M == mums.dim + 1, float(bound - total), pur,
                             mums.dim, mums.M, mums.kappa, provenance)


def gd_max_probability(C: float, d: int) -> float:
    """Upper bound on max_n p_n given the index of coincidence C."""
    slack = 1e-12
    if not 1.0 / d - slack <= C <= 1.0 + slack:
        raise ValueError(f"index of coincidence must be in [1/d, 1], got {C!r}")
    return (1.0 + math.sqrt(d - 1) * math.sqrt(max(C * d - 1.0, 0.0))) / d


def _collision_part(M, d, kappa, purity, excess) -> float:
    return -math.log(average_coincidence_bound(M, d, kappa, purity, kappa_excess=excess))


def _min_entropy_part(M, d, kappa, purity, excess) -> float:
    return math.log(d) - math.log1p(
        math.sqrt(_kd(kappa, d, excess)) * math.sqrt(max(purity * d - 1.0, 0.0)) / math.sqrt(M)
    )


def renyi_uncertainty_bound(alpha: float, M: int, d: int, kappa: float, purity: float, *,
                            kappa_excess: float | None = None) -> float:
    """Lower bound on the average Rényi alpha-entropy, alpha in [2, inf]."""
    if not alpha >= 2:
        raise ValueError(f"Rényi bound needs alpha >= 2, got {alpha!r}")
    purity = _check_params(M, d, kappa, purity)
    r2 = _collision_part(M, d, kappa, purity, kappa_excess)
    rinf = _min_entropy_part(M, d, kappa, purity, kappa_excess)
    if math.isinf(alpha):
        return rinf
    return r2 / (alpha - 1.0) + (alpha - 2.0) / (alpha - 1.0) * rinf


def renyi_low_order_bound(alpha: float, M: int, d: int, kappa: float, purity: float, *,
                          kappa_excess: float | None = None) -> float:
    """Order-independent lower bound on the average Rényi entropy for 0 < alpha < 2.

    R_alpha >= R_2 for alpha <= 2, so the averaged collision-entropy bound
    applies unchanged.
    """
    if not 0 < alpha <= 2:
        raise ValueError(f"low-order Rényi bound needs 0 < alpha <= 2, got {alpha!r}")
    purity = _check_params(M, d, kappa, purity)
    return _collision_part(M, d, kappa, purity, kappa_excess)


def tsallis_uncertainty_bound(alpha: float, M: int, d: int, kappa: float, purity: float, *,
                              kappa_excess: float | None = None) -> float:
    """Lower bound on the average Tsallis alpha-entropy, alpha in (0, 2]."""
    if not 0 < alpha <= 2:
        raise ValueError(f"Tsallis bound needs 0 < alpha <= 2, got {alpha!r}")
    purity = _check_params(M, d, kappa, purity)
    avg = average_coincidence_bound(M, d, kappa, purity, kappa_excess=kappa_excess)
    return alpha_log(1.0 / avg, alpha)


def shannon_uncertainty_bound(M: int, d: int, kappa: float, purity: float, *,
                              kappa_excess: float | None = None) -> float:
    return tsallis_uncertainty_bound(1.0, M, d, kappa, purity, kappa_excess=kappa_excess)


def tsallis_inefficiency_bound(alpha: float, M: int, d: int, kappa: float, purity: float,
                               eta: float, *, kappa_excess: float | None = None) -> float:
    """Bound on the average Tsallis entropy of distorted statistics."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    base = tsallis_uncertainty_bound(alpha, M, d, kappa, purity, kappa_excess=kappa_excess)
    return eta**alpha * base + binary_tsallis(eta, alpha)


def verify_uncertainty(mums: MumSet, rho, alpha: float, family: str,
                       eta: float | None = None, provenance: str = "") -> BoundReport:
    """Measure ``rho`` with every POVM of ``mums`` and check one entropic bound."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family == "renyi" and not alpha >= 2:
        raise ValueError(f"Rényi family needs alpha >= 2, got {alpha!r}")
    if family in ("tsallis", "tsallis_inefficiency") and not 0 < alpha <= 2:
        raise ValueError(f"{family} family needs 0 < alpha <= 2, got {alpha!r}")
    if family == "shannon" and alpha != 1:
        raise ValueError(f"shannon family is alpha = 1, got {alpha!r}")
    if family == "tsallis_inefficiency":
        if eta is None:
            raise ValueError("tsallis_inefficiency family needs eta")
    elif eta is not None:
        raise ValueError(f"eta only applies to tsallis_inefficiency, not {family}")

    R = as_matrix(rho)
    M, d, kappa, ex = mums.M, mums.dim, mums.kappa, mums.kappa_excess
    pur = state_purity(R)
    probs = all_probabilities(mums, R)
    if family == "renyi":
        observed = np.mean([renyi_entropy(p, alpha) for p in probs])
        bound = renyi_uncertainty_bound(alpha, M, d, kappa, pur, kappa_excess=ex)
    elif family == "tsallis_inefficiency":
        observed = np.mean([tsallis_entropy(distort(p, eta).extended, alpha) for p in probs])
        bound = tsallis_inefficiency_bound(alpha, M, d, kappa, pur, eta, kappa_excess=ex)
    else:
        observed = np.mean([tsallis_entropy(p, alpha) for p in probs])
        bound = tsallis_uncertainty_bound(alpha, M, d, kappa, pur, kappa_excess=ex)
    observed = float(observed)
    return BoundReport(family, float(alpha), M, d, kappa, pur, eta, bound, observed,
                       observed >= bound - TOL["bound"], provenance)
