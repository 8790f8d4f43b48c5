"""Mutually unbiased measurements P[b][n] = I/d + t F[b][n]."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import __version__
from .entropy import ProbabilityDistribution
from .fbasis import FFamily, build_f_family
from .linalg import HermitianOperator, LinalgError, as_matrix, eigenvalues_hermitian
from .tolerances import TOL

SCHEMA_VERSION = "mumkit/1"


class MumError(ValueError):
    pass


@dataclass(frozen=True)
class Povm:
    dim: int
    elements: tuple[HermitianOperator, ...]

    def stack(self) -> np.ndarray:
        return np.array([e.matrix for e in self.elements])


@dataclass(frozen=True)
class MumSet:
    dim: int
    t: float
    kappa: float
    povms: tuple[Povm, ...]

    @property
    def M(self) -> int:
        return len(self.povms)

    @property
    def kappa_excess(self) -> float:
        """kappa - 1/d computed from t, exact even where kappa rounds to 1/d."""
        return efficiency_excess(self.dim, self.t)

    def stack(self) -> np.ndarray:
        """Elements as an array of shape (M, d, d, d)."""
        return np.array([p.stack() for p in self.povms])


def efficiency_excess(d: int, t: float) -> float:
    """kappa - 1/d for parameter t."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return float(t * t * (1.0 + np.sqrt(d)) ** 2 * (d - 1))


def efficiency_from_t(d: int, t: float) -> float:
    return 1.0 / d + efficiency_excess(d, t)


def t_from_efficiency(d: int, kappa: float) -> float:
    """Positive t giving efficiency ``kappa``."""
    if not 1.0 / d <= kappa:
        raise ValueError(f"kappa must be >= 1/d, got {kappa}")
    return float(np.sqrt((kappa - 1.0 / d) / ((1.0 + np.sqrt(d)) ** 2 * (d - 1))))


@lru_cache(maxsize=None)
def _f_spectra(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Min and max eigenvalue of every F[b][n], arrays of shape (d+1, d)."""
    family = build_f_family(d)
    lo = np.empty((d + 1, d))
    hi = np.empty((d + 1, d))
    for b, block in enumerate(family.operators):
        for n, op in enumerate(block):
            w = eigenvalues_hermitian(op)
            lo[b, n], hi[b, n] = w[0], w[-1]
    lo.setflags(write=False)
    hi.setflags(write=False)
    return lo, hi


def admissible_t_interval(family: FFamily | int) -> tuple[float, float]:
    """Interval of t for which every I/d + t F[b][n] is positive semidefinite."""
    d = family if isinstance(family, int) else family.dim
    lo, hi = _f_spectra(d)
    inv = 1.0 / d
    t_hi = float(np.min(inv / -lo[lo < 0]))
    t_lo = float(-np.min(inv / hi[hi > 0]))
    return t_lo, t_hi


def build_mum_set(d: int, t: float | None = None, M: int | None = None) -> MumSet:
    """Build the first ``M`` measurements of the complete MUM set.

    ``t`` defaults to the upper end of the admissible interval (largest
    efficiency), ``M`` to ``d + 1``.
    """
    if int(d) != d or d < 2:
        raise MumError(f"dimension must be an integer >= 2, got {d!r}")
    M = d + 1 if M is None else M
    if int(M) != M or not 1 <= M <= d + 1:
        raise MumError(f"M must be in 1..{d + 1}, got {M!r}")
    t_lo, t_hi = admissible_t_interval(d)
    if t is None:
        t = t_hi
    t = float(t)
    slack = 1e-12 * max(abs(t_lo), t_hi)
    if not t_lo - slack <= t <= t_hi + slack:
        lo, hi = _f_spectra(d)
        ext = lo if t > 0 else hi
        b, n = np.unravel_index(np.argmin(1.0 / d + t * ext), ext.shape)
        raise MumError(
            f"t={t!r} outside admissible interval [{t_lo!r}, {t_hi!r}]: element "
            f"(b={b + 1}, n={n + 1}) has eigenvalue {1.0 / d + t * ext[b, n]:.3e}"
        )
    family = build_f_family(d)
    eye = np.eye(d) / d
    povms = tuple(
        Povm(d, tuple(HermitianOperator(eye + t * F.matrix) for F in family[b]))
        for b in range(M)
    )
    return MumSet(d, t, efficiency_from_t(d, t), povms)


def measurement_probabilities(povm: Povm, rho) -> ProbabilityDistribution:
    """p_n = Tr(P_n rho)."""
    R = as_matrix(rho)
    if R.shape != (povm.dim, povm.dim):
        raise LinalgError(f"state shape {R.shape} does not match POVM dim {povm.dim}")
    p = np.einsum("nij,ji->n", povm.stack(), R).real
    return ProbabilityDistribution(p)


def all_probabilities(mums: MumSet, rho) -> np.ndarray:
    """Probabilities for every measurement, shape (M, d), validated row by row."""
    R = as_matrix(rho)
    if R.shape != (mums.dim, mums.dim):
        raise LinalgError(f"state shape {R.shape} does not match MUM dim {mums.dim}")
    P = np.einsum("bnij,ji->bn", mums.stack(), R).real
    return np.array([ProbabilityDistribution(row).probs for row in P])


def conjugate(mums: MumSet) -> MumSet:
    """Element-wise transpose in the computational basis."""
    povms = tuple(
        Povm(p.dim, tuple(e.transpose() for e in p.elements)) for p in mums.povms
    )
    return MumSet(mums.dim, mums.t, mums.kappa, povms)


def mum_residuals(mums: MumSet) -> dict[str, float]:
    """Worst violation of each MUM axiom.

    Keys: ``trace``, ``completeness``, ``psd`` (positive part of minus the
    smallest eigenvalue), ``unbiased`` (cross-measurement overlaps vs 1/d),
    ``structure`` (within-measurement Gram vs the kappa form), ``kappa``
    (stored kappa vs the formula in t), ``kappa_range``.
    """
    d, kappa = mums.dim, mums.kappa
    E = mums.stack()
    M = E.shape[0]
    res: dict[str, float] = {}
    res["trace"] = float(np.max(np.abs(np.einsum("bnii->bn", E) - 1.0)))
    res["completeness"] = float(np.max(np.abs(E.sum(axis=1) - np.eye(d))))
    min_eig = min(eigenvalues_hermitian(e)[0] for p in mums.povms for e in p.elements)
    res["psd"] = max(0.0, -float(min_eig))
    gram = np.einsum("amij,bnji->ambn", E, E).real
    within = kappa * np.eye(d) + (1.0 - kappa) / (d - 1) * (1.0 - np.eye(d))
    unb = 0.0
    struct = 0.0
    for a in range(M):
        struct = max(struct, float(np.max(np.abs(gram[a, :, a, :] - within))))
        for b in range(M):
            if a != b:
                unb = max(unb, float(np.max(np.abs(gram[a, :, b, :] - 1.0 / d))))
    res["unbiased"] = unb
    res["structure"] = struct
    res["kappa"] = abs(kappa - efficiency_from_t(d, mums.t))
    res["kappa_range"] = max(0.0, 1.0 / d - kappa, kappa - 1.0 - 1e-12)
    return res


def validate_mum_set(mums: MumSet, tol: float | None = None) -> dict[str, float]:
    """Raise ``MumError`` if any residual exceeds ``tol``; return the residuals."""
    tol = TOL["mum_axiom"] if tol is None else tol
    res = mum_residuals(mums)
    limits = dict.fromkeys(res, tol)
    limits["psd"] = TOL["psd"]
    limits["kappa"] = 1e-10
    bad = {k: v for k, v in res.items() if v > limits[k]}
    if bad:
        raise MumError(f"MUM axioms violated: {bad}")
    return res


def _encode_matrix(a: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(a).ravel()]


def _decode_matrix(rows: list, d: int) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in rows], dtype=np.complex128)
    if arr.size != d * d:
        raise MumError(f"matrix has {arr.size} entries, expected {d * d}")
    return arr.reshape(d, d)


def mum_to_dict(mums: MumSet) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "library_version": __version__,
        "d": mums.dim,
        "t": mums.t,
        "kappa": mums.kappa,
        "povms": [[_encode_matrix(e.matrix) for e in p.elements] for p in mums.povms],
    }


_MUM_FIELDS = {"schema_version", "library_version", "d", "t", "kappa", "povms"}


def mum_from_dict(doc: dict) -> MumSet:
    unknown = set(doc) - _MUM_FIELDS
    if unknown:
        raise MumError(f"unknown fields in MUM document: {sorted(unknown)}")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise MumError(f"unsupported schema {doc.get('schema_version')!r}")
    d = int(doc["d"])
    povms = tuple(
        Povm(d, tuple(HermitianOperator(_decode_matrix(e, d)) for e in p))
        for p in doc["povms"]
    )
    return MumSet(d, float(doc["t"]), float(doc["kappa"]), povms)


def dumps(mums: MumSet) -> str:
    # json uses repr() for floats: shortest string that round-trips exactly
    return json.dumps(mum_to_dict(mums), indent=1)


def loads(text: str) -> MumSet:
    return mum_from_dict(json.loads(text))
