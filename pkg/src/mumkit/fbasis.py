"""Traceless operator bases: generalized Gell-Mann matrices and the F family.

The F family is ``(d + 1) * d`` traceless Hermitian operators ``F[b][n]``
with

* ``Tr(F[a][m] F[b][n]) = 0`` for ``a != b``;
* ``Tr(F[b][m] F[b][n]) = (1 + sqrt(d))**2 * (d - 1)`` if ``m == n``
  and ``-(1 + sqrt(d))**2`` otherwise.

Construction: normalise the ``d**2 - 1`` Gell-Mann generators to unit
Hilbert-Schmidt norm and split them, in order, into ``d + 1`` blocks of
``d - 1``. With ``S_b`` the sum of block ``b``,

    F[b][n] = S_b - (d + sqrt(d)) * G[b][n]     (n < d)
    F[b][d] = (1 + sqrt(d)) * S_b

Indices are 0-based in code: ``F[b][n]`` with ``0 <= b <= d`` and
``0 <= n < d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import HermitianOperator, LinalgError, as_matrix


@dataclass(frozen=True)
class GeneratorBasis:
    dim: int
    generators: tuple[HermitianOperator, ...]

    def gram(self) -> np.ndarray:
        """Real Gram matrix Tr(G_j G_k)."""
        stack = np.stack([g.matrix for g in self.generators])
        return np.einsum("aij,bji->ab", stack, stack).real


@dataclass(frozen=True)
class FFamily:
    dim: int
    operators: tuple[tuple[HermitianOperator, ...], ...]

    @property
    def n_blocks(self) -> int:
        return len(self.operators)

    def __getitem__(self, b: int) -> tuple[HermitianOperator, ...]:
        return self.operators[b]

    def stack(self) -> np.ndarray:
        """All operators as an array of shape (d+1, d, d, d)."""
        return np.array([[op.matrix for op in block] for block in self.operators])


@dataclass(frozen=True)
class FExpansion:
    """Coefficients r[b][n] of rho = I/d + sum r[b][n] F[b][n]."""

    dim: int
    coefficients: np.ndarray  # shape (d+1, d)

    @property
    def block_sums(self) -> np.ndarray:
        return self.coefficients.sum(axis=1)


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")


def gell_mann_basis(d: int) -> GeneratorBasis:
    """Generalized Gell-Mann matrices in the usual normalisation Tr(G^2) = 2.

    Ordered as all symmetric off-diagonal ones (pairs ``j < k`` in
    lexicographic order), then the antisymmetric ones in the same order,
    then the ``d - 1`` diagonal ones.
    """
    _check_dim(d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    gens = []
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1.0
        gens.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j
        g[k, j] = 1j
        gens.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        gens.append(np.diag(np.sqrt(2.0 / (l * (l + 1))) * diag).astype(np.complex128))
    return GeneratorBasis(d, tuple(HermitianOperator(g) for g in gens))


@lru_cache(maxsize=None)
def build_f_family(d: int) -> FFamily:
    """Deterministic F family for dimension ``d`` (cached; values are immutable)."""
    _check_dim(d)
    gens = [g.matrix / np.sqrt(2.0) for g in gell_mann_basis(d).generators]
    rd = np.sqrt(d)
    blocks = []
    for b in range(d + 1):
        members = gens[b * (d - 1):(b + 1) * (d - 1)]
        total = np.sum(members, axis=0)
        ops = [total - (d + rd) * g for g in members]
        ops.append((1.0 + rd) * total)
        blocks.append(tuple(HermitianOperator(op) for op in ops))
    return FFamily(d, tuple(blocks))


def f_gram_expected(d: int) -> np.ndarray:
    """Target within-block Gram matrix (d x d)."""
    c = (1.0 + np.sqrt(d)) ** 2
    return c * (d * np.eye(d) - np.ones((d, d)))


def expand_in_f_basis(rho, family: FFamily) -> FExpansion:
    """Coefficients of ``rho`` in the F family, in the gauge R^(b) = 0.

    Uses r[b][n] = Tr(rho F[b][n]) / ((1 + sqrt(d))**2 * d), which is exact
    because within a block the F operators sum to zero.
    """
    R = as_matrix(rho)
    d = family.dim
    if R.shape != (d, d):
        raise LinalgError(f"state has shape {R.shape}, family has dim {d}")
    tr = np.trace(R)
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"density matrix must have unit trace, got {tr.real:.12g}")
    F = family.stack()
    overlaps = np.einsum("bnij,ji->bn", F, R).real
    coeffs = overlaps / ((1.0 + np.sqrt(d)) ** 2 * d)
    return FExpansion(d, coeffs)


def reconstruct(expansion: FExpansion, family: FFamily) -> np.ndarray:
    d = family.dim
    return np.eye(d) / d + np.einsum("bn,bnij->ij", expansion.coefficients, family.stack())


def purity_from_expansion(expansion: FExpansion) -> float:
    """Tr(rho^2) = 1/d + (1+sqrt d)^2 sum_b (d sum_n r_n^2 - R_b^2)."""
    d = expansion.dim
    r = expansion.coefficients
    R = expansion.block_sums
    return 1.0 / d + (1.0 + np.sqrt(d)) ** 2 * float(np.sum(d * np.sum(r * r, axis=1) - R * R))
