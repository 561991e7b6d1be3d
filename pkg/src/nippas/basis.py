"""Graded-lexicographic tensor Chebyshev basis on a bounding box.

Multi-indices are plain tuples of non-negative ints. Within a total degree the
order is descending lexicographic, so ``(1, 0)`` precedes ``(0, 1)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .geometry import BoundingBox


def graded_lex_key(m) -> tuple:
    return (sum(m), tuple(-v for v in m))


def first_index(dim: int) -> tuple:
    return (0,) * dim


def successor(m) -> tuple:
    """Next multi-index after ``m`` in graded-lex order."""
    m = tuple(int(v) for v in m)
    d = len(m)
    tail = m[-1]
    for i in range(d - 2, -1, -1):
        if m[i] > 0:
            new = list(m)
            new[i] -= 1
            new[i + 1] = tail + 1
            if i + 1 < d - 1:
                new[-1] = 0
            return tuple(new)
    return (sum(m) + 1,) + (0,) * (d - 1)


def graded_lex_indices(dim: int, count: int) -> list[tuple]:
    out = [first_index(dim)]
    while len(out) < count:
        out.append(successor(out[-1]))
    return out[:count]


@dataclass(frozen=True)
class BasisSpec:
    box: BoundingBox
    indices: tuple = ()

    def __post_init__(self):
        idx = tuple(tuple(int(v) for v in m) for m in self.indices)
        for m in idx:
            if len(m) != self.box.dim or min(m) < 0:
                raise ValueError(f"bad multi-index {m} for dimension {self.box.dim}")
        for a, b in zip(idx, idx[1:]):
            if graded_lex_key(a) >= graded_lex_key(b):
                raise ValueError(f"indices not strictly graded-lex ordered at {a}, {b}")
        object.__setattr__(self, "indices", idx)

    @property
    def dim(self) -> int:
        return self.box.dim

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def index_array(self) -> np.ndarray:
        return np.array(self.indices, dtype=np.intp).reshape(-1, self.dim)

    def extended(self) -> "BasisSpec":
        return BasisSpec(self.box, self.indices + (next_index(self),))

    def vandermonde(self, Z) -> np.ndarray:
        """``(n, len(self))`` matrix of basis values at a batch of points."""
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return kernels.cheb_vandermonde(Z, self.index_array, self.box.lo_array,
                                        self.box.hi_array)

    def column(self, j: int, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        return kernels.cheb_vandermonde(Z, self.index_array[j:j + 1],
                                        self.box.lo_array, self.box.hi_array)[:, 0]


def next_index(spec: BasisSpec) -> tuple:
    if not spec.indices:
        return first_index(spec.dim)
    return successor(spec.indices[-1])


def chebyshev_t(k: int, t: float) -> float:
    """``T_k(t)`` by the three-term recurrence."""
    if k == 0:
        return 1.0
    prev, cur = 1.0, float(t)
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * t * cur - prev
    return cur


def eval_basis_fn(m, box: BoundingBox, z) -> float:
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if not box.contains(z):
        warnings.warn(f"evaluating basis outside its box at {tuple(z)}", stacklevel=2)
    t = 2.0 * (z - box.lo_array) / box.width - 1.0
    val = 1.0
    for k, ti in zip(m, t):
        val *= chebyshev_t(int(k), float(ti))
    return val


def eval_combination(spec: BasisSpec, coeffs, z):
    """``sum_i c_i phi_i(z)`` for one point ``z`` or an ``(n, d)`` batch.

    ``coeffs`` may be a vector or an ``(m, k)`` matrix (one column per output).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != len(spec):
        raise ValueError(f"{coeffs.shape[0]} coefficients for {len(spec)} basis functions")
    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        z = z.reshape(1)
    single = z.ndim == 1 and z.shape[0] == spec.dim
    if single:
        Z = z[None, :]
    elif z.ndim == 1 and spec.dim == 1:
        Z = z[:, None]
    else:
        Z = z
    out = spec.vandermonde(Z) @ coeffs
    return out[0] if single else out
