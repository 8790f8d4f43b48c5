"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The one piece
of structure added on top is :class:`HermitianOperator`, which symmetrises
its input on construction and refuses inputs that are far from Hermitian.

The Hermitian eigensolver is a complex Jacobi method. Each sweep visits all
index pairs in tournament order and applies the disjoint rotations of one
round as a single unitary. It is slow compared to LAPACK but has no hidden
state and behaves predictably at the small dimensions used here (d up to a
few dozen).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .tolerances import TOL


class LinalgError(ValueError):
    """Shape mismatch, non-Hermitian input and similar failures."""


class ConvergenceError(ArithmeticError):
    """Jacobi iteration did not converge within the sweep cap."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a 2-D complex array (unwrapping HermitianOperator)."""
    if isinstance(a, HermitianOperator):
        return a.matrix
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2:
        raise LinalgError(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


class HermitianOperator:
    """A d x d Hermitian matrix.

    The stored matrix is ``(A + A^dagger) / 2``. The max-norm of the removed
    anti-Hermitian part is kept in :attr:`correction`; if it exceeds
    ``TOL["hermitian_reject"]`` construction fails.

    Instances are treated as immutable: the underlying array is marked
    read-only.
    """

    __slots__ = ("matrix", "correction")

    def __init__(self, a):
        arr = np.array(as_matrix(a), dtype=np.complex128, copy=True)
        if arr.shape[0] != arr.shape[1]:
            raise LinalgError(f"Hermitian operator must be square, got {arr.shape}")
        herm = 0.5 * (arr + arr.conj().T)
        correction = float(np.max(np.abs(arr - herm))) if arr.size else 0.0
        if correction > TOL["hermitian_reject"]:
            raise LinalgError(
                f"matrix is not Hermitian: anti-Hermitian part {correction:.3e} "
                f"exceeds {TOL['hermitian_reject']:.1e}"
            )
        herm.setflags(write=False)
        self.matrix = herm
        self.correction = correction

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def transpose(self) -> HermitianOperator:
        return HermitianOperator(self.matrix.T)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __add__(self, other):
        return HermitianOperator(self.matrix + as_matrix(other))

    def __sub__(self, other):
        return HermitianOperator(self.matrix - as_matrix(other))

    def __mul__(self, scalar):
        if not np.isscalar(scalar) or np.iscomplexobj(scalar):
            return NotImplemented
        return HermitianOperator(self.matrix * float(scalar))

    __rmul__ = __mul__

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


def identity(d: int) -> HermitianOperator:
    return HermitianOperator(np.eye(d))


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt product Tr(a b) of two Hermitian operators.

    The result is real in exact arithmetic; an imaginary residue above
    ``TOL["hs_imag"]`` (scaled by the operand norms) raises.
    """
    A, B = as_matrix(a), as_matrix(b)
    if A.shape != B.shape:
        raise LinalgError(f"dimension mismatch: {A.shape} vs {B.shape}")
    # Tr(A B) = sum_ij A_ij B_ji
    val = np.sum(A * B.T)
    scale = max(1.0, float(np.linalg.norm(A) * np.linalg.norm(B)))
    if abs(val.imag) > TOL["hs_imag"] * scale:
        raise LinalgError(f"Tr(AB) has imaginary part {val.imag:.3e}; inputs not Hermitian")
    return float(val.real)


def trace_product(a, b) -> complex:
    """Tr(a b) for general square matrices."""
    A, B = as_matrix(a), as_matrix(b)
    if A.shape[1] != B.shape[0] or A.shape[0] != B.shape[1]:
        raise LinalgError(f"dimension mismatch: {A.shape} vs {B.shape}")
    return complex(np.sum(A * B.T))


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(off.real**2 + off.imag**2)))


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament ordering: n - 1 (or n) rounds of disjoint index pairs.

    Every pair (p, q), p < q, appears exactly once per sweep.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if max(a, b) < n]
        rounds.append((np.array([a for a, _ in pairs]), np.array([b for _, b in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _rotate_round(A: np.ndarray, V: np.ndarray, P: np.ndarray, Q: np.ndarray) -> None:
    """Annihilate A[p, q] for all disjoint pairs of one round, in place."""
    apq = A[P, Q]
    mag = np.abs(apq)
    # entries this small are already far below any convergence threshold
    live = mag > 1e-300
    if not live.any():
        return
    safe = np.where(live, mag, 1.0)
    phase = np.where(live, apq / safe, 1.0)
    app, aqq = A[P, P].real, A[Q, Q].real
    with np.errstate(over="ignore", invalid="ignore"):
        theta = (aqq - app) / (2.0 * safe)
        big = np.abs(theta) > 1e150
        t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
    t = np.where(live, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # per pair G = diag(1, conj(phase)) @ [[c, s], [-s, c]]; A <- R^dag A R
    R = np.eye(A.shape[0], dtype=np.complex128)
    R[P, P] = c
    R[P, Q] = s
    R[Q, P] = -s * phase.conjugate()
    R[Q, Q] = c * phase.conjugate()
    A[:] = R.conj().T @ A @ R
    A[P, Q] = 0.0
    A[Q, P] = 0.0
    A[P, P] = app - t * mag
    A[Q, Q] = aqq + t * mag
    V[:] = V @ R


def jacobi_eigh(a, *, tol: float | None = None, max_sweeps: int | None = None):
    """Eigen-decomposition of a Hermitian matrix by Jacobi rotations.

    Parameters
    ----------
    a : HermitianOperator or array_like
        Hermitian input. Only the symmetrised part is used.
    tol : float, optional
        Stop when the off-diagonal Frobenius mass falls below
        ``tol * max(1, ||a||_F)``. Defaults to ``TOL["jacobi_offdiag"]``.
    max_sweeps : int, optional
        Sweep cap, default ``TOL["jacobi_max_sweeps"]``.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    v : ndarray
        Unitary matrix whose columns are the matching eigenvectors.

    Raises
    ------
    ConvergenceError
        If the sweep cap is reached; carries the final off-diagonal norm.
    """
    A = as_matrix(a)
    A = 0.5 * (A + A.conj().T)
    n = A.shape[0]
    if A.shape != (n, n):
        raise LinalgError(f"square input required, got {A.shape}")
    tol = TOL["jacobi_offdiag"] if tol is None else tol
    max_sweeps = int(TOL["jacobi_max_sweeps"] if max_sweeps is None else max_sweeps)

    A = A.copy()
    V = np.eye(n, dtype=np.complex128)
    threshold = tol * max(1.0, float(np.linalg.norm(A)))
    off = _offdiag_norm(A)
    sweeps = 0
    while off >= threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})",
                residual=off,
            )
        for P, Q in _round_robin(n):
            _rotate_round(A, V, P, Q)
        sweeps += 1
        off = _offdiag_norm(A)

    w = np.diag(A).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigenvalues_hermitian(a) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian operator."""
    w, _ = jacobi_eigh(a)
    return w


def min_eigenvalue(a) -> float:
    return float(eigenvalues_hermitian(a)[0])


def kron(a, b) -> np.ndarray:
    """Kronecker product, A as the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def _local_dim(n: int, d: int | None) -> int:
    if d is None:
        d = int(round(np.sqrt(n)))
    if d < 1 or d * d != n:
        raise LinalgError(f"matrix of size {n} is not d^2 for d={d}")
    return d


def partial_trace(rho, subsystem: str, d: int | None = None) -> np.ndarray:
    """Trace out one half of a d^2 x d^2 operator.

    Row index ``i`` of the joint space is ``i_A * d + i_B``. ``subsystem``
    names the factor that is traced *out*: ``"B"`` returns rho_A = Tr_B(rho),
    ``"A"`` returns rho_B = Tr_A(rho).
    """
    R = as_matrix(rho)
    n = R.shape[0]
    if R.shape != (n, n):
        raise LinalgError(f"square input required, got {R.shape}")
    d = _local_dim(n, d)
    T = R.reshape(d, d, d, d)  # [iA, iB, jA, jB]
    if subsystem == "B":
        return np.einsum("ikjk->ij", T)
    if subsystem == "A":
        return np.einsum("kikj->ij", T)
    raise LinalgError(f"subsystem must be 'A' or 'B', got {subsystem!r}")


def max_norm(a) -> float:
    return float(np.max(np.abs(as_matrix(a))))
