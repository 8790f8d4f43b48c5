"""Entanglement detection with two local MUM sets.

The correlation measure is

    J_M(rho) = sum_{b < M} sum_n Tr[(P_n^(b) (x) Q_n^(b)) rho],

and a separable state never pushes it above
``sqrt(M + kA d - 1) sqrt(M + kB d - 1) / d``. Joint indices follow the
Kronecker order A (x) B with A as the slow index.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import ProbabilityDistribution
from .linalg import HermitianOperator, LinalgError, eigenvalues_hermitian, partial_trace
from .mum import MumSet, conjugate
from .states import purity
from .tolerances import TOL
from .uncertainty import _check_params


class BipartiteState:
    """Density matrix on C^d (x) C^d.

    Checked on construction for unit trace and (unless ``validate=False``)
    positivity via the Jacobi eigensolver.
    """

    __slots__ = ("d", "rho", "purity")

    def __init__(self, rho, d: int | None = None, *, validate: bool = True):
        op = rho if isinstance(rho, HermitianOperator) else HermitianOperator(rho)
        n = op.dim
        if d is None:
            d = int(round(math.sqrt(n)))
        if d * d != n:
            raise LinalgError(f"joint dimension {n} is not d^2 for d={d}")
        tr = op.trace()
        if abs(tr - 1.0) > TOL["trace"]:
            raise ValueError(f"state must have unit trace, got {tr:.15g}")
        if validate:
            lam = eigenvalues_hermitian(op)[0]
            if lam < -TOL["psd"]:
                raise ValueError(f"state is not positive semidefinite (min eigenvalue {lam:.3e})")
        self.d = d
        self.rho = op
        self.purity = purity(op)

    @property
    def matrix(self) -> np.ndarray:
        return self.rho.matrix

    def reduced(self, keep: str) -> np.ndarray:
        """Reduced state of subsystem ``keep`` ('A' or 'B')."""
        if keep not in ("A", "B"):
            raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
        return partial_trace(self.matrix, "B" if keep == "A" else "A", self.d)

    def __repr__(self):
        return f"BipartiteState(d={self.d}, purity={self.purity:.6g})"


@dataclass(frozen=True)
class DetectionVerdict:
    J_value: float
    bound_product: float | None
    bound_purity: float
    bound_separable: float
    flags: dict = field(default_factory=dict)
    note: str = ""

    @property
    def entangled(self) -> bool:
        return self.flags.get("entangled", False)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["record"] = "verdict"
        return doc


def maximally_entangled(d: int) -> BipartiteState:
    """|Phi+><Phi+| with |Phi+> = d^(-1/2) sum_i |i>|i>."""
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    v = np.zeros(d * d, dtype=np.complex128)
    v[[i * d + i for i in range(d)]] = 1.0 / math.sqrt(d)
    return BipartiteState(np.outer(v, v.conj()), d, validate=False)


def isotropic_state(d: int, gamma: float) -> BipartiteState:
    """gamma |Phi+><Phi+| + (1 - gamma) I / d^2."""
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    phi = maximally_entangled(d).matrix
    rho = gamma * phi + (1.0 - gamma) * np.eye(d * d) / (d * d)
    return BipartiteState(rho, d, validate=False)


def conjugate_mum(mums: MumSet) -> MumSet:
    """MUM set of computational-basis transposes, same efficiency."""
    return conjugate(mums)


def _check_pair(mums_A: MumSet, mums_B: MumSet, state: BipartiteState) -> None:
    if mums_A.dim != mums_B.dim or mums_A.dim != state.d:
        raise LinalgError(
            f"dimension mismatch: A={mums_A.dim}, B={mums_B.dim}, state d={state.d}"
        )
    if mums_A.M != mums_B.M:
        raise ValueError(f"MUM sets must have equal size, got {mums_A.M} and {mums_B.M}")


def joint_distribution(mums_A: MumSet, mums_B: MumSet, state: BipartiteState, b: int) -> np.ndarray:
    """d x d matrix of P^(b)(m, n) = Tr[(P_m (x) Q_n) rho] (clamped, validated)."""
    _check_pair(mums_A, mums_B, state)
    if not 0 <= b < mums_A.M:
        raise IndexError(f"block index {b} out of range 0..{mums_A.M - 1}")
    d = state.d
    P = mums_A.povms[b].stack()
    Q = mums_B.povms[b].stack()
    T = state.matrix.reshape(d, d, d, d)  # [iA, iB, jA, jB]
    joint = np.einsum("mji,nlk,ikjl->mn", P, Q, T).real
    return ProbabilityDistribution(joint.ravel()).probs.reshape(d, d)


def joint_probability(mums_A: MumSet, mums_B: MumSet, state: BipartiteState,
                      b: int, m: int, n: int) -> float:
    d = state.d
    if not (0 <= m < d and 0 <= n < d):
        raise IndexError(f"outcome indices ({m}, {n}) out of range 0..{d - 1}")
    return float(joint_distribution(mums_A, mums_B, state, b)[m, n])


def correlation_measure(mums_A: MumSet, mums_B: MumSet, state: BipartiteState) -> float:
    _check_pair(mums_A, mums_B, state)
    return float(sum(np.trace(joint_distribution(mums_A, mums_B, state, b))
                     for b in range(mums_A.M)))


def product_bound(M: int, d: int, kappa_A: float, kappa_B: float,
                  purity_A: float, purity_B: float) -> float:
    """Upper bound on J_M for product states with known local purities."""
    value = 1.0
    for kappa, pur in ((kappa_A, purity_A), (kappa_B, purity_B)):
        pur = _check_params(M, d, kappa, pur)
        value *= math.sqrt((M * (d - 1) + max(kappa * d - 1, 0.0) * (pur * d - 1)) / (d * (d - 1)))
    return value


def product_bound_from_joint_purity(M: int, d: int, kappa: float, joint_purity: float) -> float:
    """Upper bound on J_M for product states given only Tr(rho_AB^2)."""
    _check_params(M, d, kappa, 1.0)
    lo = 1.0 / (d * d)
    if not lo - 1e-9 <= joint_purity <= 1.0 + 1e-9:
        raise ValueError(f"joint purity must be in [1/d^2, 1], got {joint_purity!r}")
    joint_purity = min(max(joint_purity, lo), 1.0)
    k = max(kappa * d - 1.0, 0.0)
    gamma = M * (d - 1) - k
    inner = gamma**2 + k * (gamma * d + (M + kappa * d - 1) * (d - 1) * d * joint_purity)
    return math.sqrt(inner) / (d * (d - 1))


def separability_bound(M: int, d: int, kappa_A: float, kappa_B: float | None = None) -> float:
    """Upper bound on J_M over all separable states."""
    kappa_B = kappa_A if kappa_B is None else kappa_B
    _check_params(M, d, kappa_A, 1.0)
    _check_params(M, d, kappa_B, 1.0)
    return math.sqrt(M + kappa_A * d - 1) * math.sqrt(M + kappa_B * d - 1) / d


def isotropic_j_closed_form(M: int, d: int, kappa: float, gamma: float) -> float:
    """J_M of the isotropic state when B measures the conjugate of A's set."""
    _check_params(M, d, kappa, 1.0)
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must lie in [0, 1], got {gamma!r}")
    return M * (gamma * kappa + (1.0 - gamma) / d)


def detect(mums_A: MumSet, mums_B: MumSet, state: BipartiteState,
           reduced_purities_known: bool = True) -> DetectionVerdict:
    """Evaluate J_M against the product and separability bounds.

    A flag is raised only on strict violation by more than ``TOL["guard"]``.
    ``entangled`` is a one-sided certificate; its absence says nothing.
    When either set has trivial efficiency (kappa = 1/d) all flags stay
    down and the verdict carries a note.
    """
    _check_pair(mums_A, mums_B, state)
    M, d = mums_A.M, state.d
    kA, kB = mums_A.kappa, mums_B.kappa
    J = correlation_measure(mums_A, mums_B, state)
    guard = TOL["guard"]

    b_prod = None
    if reduced_purities_known:
        b_prod = product_bound(M, d, kA, kB, purity(state.reduced("A")), purity(state.reduced("B")))
    # the joint-purity form assumes equal efficiencies; use the larger one
    b_pur = product_bound_from_joint_purity(M, d, max(kA, kB), state.purity)
    b_sep = separability_bound(M, d, kA, kB)

    note = ""
    if min(kA, kB) - 1.0 / d < 1e-12:
        note = "trivial measurement (kappa = 1/d): J_M is constant, no detection possible"
        flags = {"not_product": False, "not_product_by_purity": False, "entangled": False}
    else:
        flags = {
            "not_product": b_prod is not None and J > b_prod + guard,
            "not_product_by_purity": J > b_pur + guard,
            "entangled": J > b_sep + guard,
        }
    return DetectionVerdict(J, b_prod, b_pur, b_sep, flags, note)
