"""Scattered-node polynomial interpolation with a live pseudo-inverse.

Every dataset sampled on the nodes (the QoI, each projected operator term,
and optionally full-space vectors) shares one square Vandermonde matrix and
its pseudo-inverse ``G``; coefficients are ``G @ data``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .basis import BasisSpec, next_index
from .geometry import BoundingBox
from .pinv import PinvState, grow_square

log = logging.getLogger(__name__)

COND_WARN = 1e8
RESYNC_TOL = 1e-10


class DuplicateNodeError(ValueError):
    def __init__(self, z, nearest, distance):
        self.z = np.asarray(z)
        self.nearest = np.asarray(nearest)
        self.distance = float(distance)
        super().__init__(f"node {tuple(self.z)} lies within {self.distance:.3g} of existing "
                         f"node {tuple(self.nearest)}")


@dataclass
class SampleSet:
    """Append-only record of nodes and per-node data vectors.

    ``data`` maps a dataset name (``"u"``, ``"term0"``, ..., ``"v"``,
    ``"full_term0"``, ...) to a list of vectors, one per node.
    """

    dim: int
    Z: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.Z)

    @property
    def nodes(self) -> np.ndarray:
        return np.array(self.Z, dtype=float).reshape(len(self.Z), self.dim)

    def array(self, name: str) -> np.ndarray:
        return np.array(self.data[name])

    @property
    def U(self) -> np.ndarray:
        return self.array("u")

    def append(self, z, values: dict):
        if self.Z and set(values) != set(self.data):
            raise ValueError(f"dataset names {sorted(values)} differ from {sorted(self.data)}")
        self.Z.append(np.asarray(z, dtype=float).copy())
        for k, v in values.items():
            self.data.setdefault(k, []).append(np.atleast_1d(np.asarray(v, dtype=float)).copy())


def sample_datasets(sample, n_terms: int, keep_full: str | None = None) -> dict:
    """Dataset dict for one black-box sample. ``keep_full`` is None, ``"v"``
    (full solution) or ``"terms"`` (full-space operator terms)."""
    out = {"u": sample.u}
    for l in range(n_terms):
        out[f"term{l}"] = sample.terms[l]
    if keep_full == "v":
        if sample.v is None:
            raise ValueError("model did not return the full solution")
        out["v"] = sample.v
    elif keep_full == "terms":
        if sample.full_terms is None:
            raise ValueError("model did not return full-space operator terms")
        for l in range(n_terms):
            out[f"full_term{l}"] = sample.full_terms[l]
    return out


class SurrogateState:
    """Basis, pseudo-inverse and coefficient matrices for a :class:`SampleSet`."""

    def __init__(self, box: BoundingBox, n_terms: int = 0):
        self.box = box
        self.n_terms = n_terms
        self.basis = BasisSpec(box, ())
        self.pinv = PinvState.empty()
        self.coeffs: dict[str, np.ndarray] = {}
        self.ill_conditioned = False
        self.cond_estimate = 1.0
        self.resyncs = 0
        self._stack_cache: dict = {}

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return self.box.dim

    def refresh(self, samples: SampleSet):
        G = self.pinv.G
        self.coeffs = {k: G @ np.array(v) for k, v in samples.data.items()}
        self._stack_cache = {}

    def coef(self, name: str) -> np.ndarray:
        return self.coeffs[name]

    def stacked(self, prefix: str) -> np.ndarray:
        """``(m, n_terms * k)`` coefficient block for ``prefix0 .. prefix{n-1}``."""
        if prefix not in self._stack_cache:
            self._stack_cache[prefix] = np.hstack([self.coeffs[f"{prefix}{l}"]
                                                   for l in range(self.n_terms)])
        return self._stack_cache[prefix]

    def vandermonde(self, Z) -> np.ndarray:
        return self.basis.vandermonde(Z)

    def eval(self, name: str, Z) -> np.ndarray:
        """``(n, k)`` values of dataset ``name`` at a batch of points."""
        if not len(self):
            raise ValueError("surrogate has no nodes")
        return self.vandermonde(_as_batch(Z, self.dim)) @ self.coeffs[name]

    def eval_qoi(self, Z) -> np.ndarray:
        return self.eval("u", Z)

    def eval_term(self, l: int, Z) -> np.ndarray:
        if not 0 <= l < self.n_terms:
            raise ValueError(f"term index {l} outside 0..{self.n_terms - 1}")
        return self.eval(f"term{l}", Z)

    def eval_terms(self, Z, prefix: str = "term", V=None) -> np.ndarray:
        """``(n, n_terms, k)`` values of all term interpolants."""
        if V is None:
            V = self.vandermonde(_as_batch(Z, self.dim))
        flat = V @ self.stacked(prefix)
        return flat.reshape(V.shape[0], self.n_terms, -1)

    def add_node(self, samples: SampleSet, z_new, values: dict, *, delta_dup: float = 0.0):
        """Append ``z_new`` with its dataset values; grows the basis by one
        function and updates ``G`` by a column then a row Greville append,
        falling back to a dense rebuild when a Penrose probe fails."""
        z_new = np.asarray(z_new, dtype=float).ravel()
        if z_new.shape[0] != self.dim:
            raise ValueError(f"node of dimension {z_new.shape[0]} for a {self.dim}-d surrogate")
        if len(samples):
            Zs = samples.nodes
            dist = np.linalg.norm(Zs - z_new, axis=1)
            j = int(np.argmin(dist))
            if dist[j] <= delta_dup:
                raise DuplicateNodeError(z_new, Zs[j], dist[j])
        new_basis = BasisSpec(self.box, self.basis.indices + (next_index(self.basis),))
        col = new_basis.column(len(new_basis) - 1, samples.nodes) if len(samples) else None
        row = new_basis.vandermonde(z_new[None, :])[0]
        state, rebuilt = grow_square(self.pinv, col, row, check=RESYNC_TOL, seed=len(new_basis))
        if rebuilt:
            log.info("incremental pseudo-inverse rebuilt densely at %d nodes", len(new_basis))
            self.resyncs += 1
        samples.append(z_new, values)
        self.basis = new_basis
        self.pinv = state
        self.refresh(samples)
        self.cond_estimate = float(np.linalg.norm(state.A) * np.linalg.norm(state.G))
        if self.cond_estimate > COND_WARN and not self.ill_conditioned:
            log.warning("Vandermonde condition estimate %.3g exceeds %.0e at %d nodes",
                        self.cond_estimate, COND_WARN, len(samples))
        self.ill_conditioned = self.cond_estimate > COND_WARN
        return self


def _as_batch(Z, dim: int) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 0:
        Z = Z.reshape(1, 1)
    elif Z.ndim == 1:
        Z = Z[None, :] if Z.shape[0] == dim else Z[:, None]
    if Z.shape[1] != dim:
        raise ValueError(f"points of dimension {Z.shape[1]} for a {dim}-d surrogate")
    return Z


def add_node(state: SurrogateState, samples: SampleSet, z_new, values: dict, **kw) -> SurrogateState:
    return state.add_node(samples, z_new, values, **kw)


def eval_qoi(state: SurrogateState, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = state.eval_qoi(z)
    return out[0] if z.ndim <= 1 and z.size == state.dim else out


def eval_term(state: SurrogateState, l: int, z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = state.eval_term(l, z)
    return out[0] if z.ndim <= 1 and z.size == state.dim else out


def build(box: BoundingBox, nodes, datasets: dict, n_terms: int = 0) -> tuple[SurrogateState, SampleSet]:
    """Surrogate from given nodes and per-node data arrays (one row per node)."""
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    if box.dim == 1 and nodes.shape[0] == 1 and nodes.shape[1] != 1:
        nodes = nodes.T
    state = SurrogateState(box, n_terms)
    samples = SampleSet(box.dim)
    for i, z in enumerate(nodes):
        state.add_node(samples, z, {k: np.atleast_2d(np.asarray(v, dtype=float).reshape(len(nodes), -1))[i]
                                    for k, v in datasets.items()})
    return state, samples
