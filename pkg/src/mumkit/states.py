"""Seeded generation of single-system and bipartite test states.

Randomness comes from numpy's PCG64 generator seeded through
``SeedSequence(seed, spawn_key=(stream,))``: one 64-bit seed, independent
streams selected by an integer stream id. The same ``(seed, stream)``
always yields the same state on a given platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import HermitianOperator, as_matrix

KINDS = ("pure_random", "mixed_random", "completely_mixed", "isotropic", "product",
         "separable_mixture")
BIPARTITE_KINDS = ("isotropic", "product", "separable_mixture")


@dataclass(frozen=True)
class StateSpec:
    """Recipe for one state.

    ``params`` by kind: ``isotropic`` takes ``gamma``; ``product`` takes
    ``pure`` (nonzero for pure local factors, default mixed). Other kinds
    take none.
    """

    kind: str
    d: int
    seed: int = 0
    stream: int = 0
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d, "seed": self.seed, "stream": self.stream,
                "params": dict(self.params)}

    @classmethod
    def from_dict(cls, doc: dict) -> StateSpec:
        unknown = set(doc) - {"kind", "d", "seed", "stream", "params"}
        if unknown:
            raise ValueError(f"unknown StateSpec fields: {sorted(unknown)}")
        return cls(doc["kind"], int(doc["d"]), int(doc.get("seed", 0)),
                   int(doc.get("stream", 0)), dict(doc.get("params", {})))


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    if seed < 0 or stream < 0:
        raise ValueError("seed and stream id must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = _gaussian(rng, d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_mixed(d: int, rng: np.random.Generator) -> np.ndarray:
    """rho = G^dag G / Tr(G^dag G) with complex Gaussian G."""
    g = _gaussian(rng, (d, d))
    rho = g.conj().T @ g
    return rho / np.trace(rho).real


def completely_mixed(d: int) -> np.ndarray:
    return np.eye(d, dtype=np.complex128) / d


def purity(rho) -> float:
    """Tr(rho^2)."""
    R = as_matrix(rho)
    return float(np.sum(np.abs(R) ** 2))


def random_separable(d: int, rng: np.random.Generator) -> np.ndarray:
    """Dirichlet mixture of 2..2d random pure product states."""
    k = int(rng.integers(2, 2 * d + 1))
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for w in weights:
        rho += w * np.kron(random_pure(d, rng), random_pure(d, rng))
    return rho


def generate(spec: StateSpec):
    """Build the state described by ``spec``.

    Returns a :class:`HermitianOperator` for single-system kinds and an
    ``entangle.BipartiteState`` for bipartite ones.
    """
    if spec.kind not in KINDS:
        raise ValueError(f"unknown state kind {spec.kind!r}; expected one of {KINDS}")
    d = spec.d
    if int(d) != d or d < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    allowed = {"isotropic": {"gamma"}, "product": {"pure"}}.get(spec.kind, set())
    extra = set(spec.params) - allowed
    if extra:
        raise ValueError(f"state kind {spec.kind!r} does not take params {sorted(extra)}")
    rng = rng_for(spec.seed, spec.stream)
    if spec.kind == "pure_random":
        return HermitianOperator(random_pure(d, rng))
    if spec.kind == "mixed_random":
        return HermitianOperator(random_mixed(d, rng))
    if spec.kind == "completely_mixed":
        return HermitianOperator(completely_mixed(d))

    from .entangle import BipartiteState, isotropic_state

    if spec.kind == "isotropic":
        if "gamma" not in spec.params:
            raise ValueError("isotropic state needs params['gamma']")
        return isotropic_state(d, float(spec.params["gamma"]))
    if spec.kind == "product":
        local = random_pure if spec.params.get("pure", 0) else random_mixed
        return BipartiteState(np.kron(local(d, rng), local(d, rng)), d)
    return BipartiteState(random_separable(d, rng), d)


def ensemble(kind: str, d: int, n: int, seed: int, **params) -> list:
    """``n`` states of one kind on consecutive stream ids."""
    return [generate(StateSpec(kind, d, seed, i, dict(params))) for i in range(n)]
