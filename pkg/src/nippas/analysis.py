"""Error measures, quadrature and ensemble statistics."""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field

import numpy as np

from .distributions import Pdf
from .geometry import BoundingBox, Domain


def gauss_legendre(n: int, interval=(-1.0, 1.0)) -> tuple[np.ndarray, np.ndarray]:
    """``n``-point Gauss-Legendre rule by Newton iteration on ``P_n``.

    Returns ascending nodes and positive weights on ``interval``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(1, n + 1)
    # Tricomi initial guesses, descending in (-1, 1)
    x = np.cos(np.pi * (i - 0.25) / (n + 0.5)) * (1.0 - (n - 1) / (8.0 * n ** 3))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = n * (x * p1 - p0) / (x * x - 1.0)
        step = p1 / dp
        x = x - step
        if np.max(np.abs(step)) < 1e-16:
            break
    # final derivative at the converged nodes
    p0, p1 = np.ones_like(x), x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    x, w = x[::-1], w[::-1]
    a, b = float(interval[0]), float(interval[1])
    return 0.5 * (b - a) * x + 0.5 * (a + b), 0.5 * (b - a) * w


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor Gauss-Legendre rule on a box."""

    box: BoundingBox
    n: int = 100

    @property
    def nodes_1d(self) -> list:
        return [gauss_legendre(self.n, (lo, hi)) for lo, hi in zip(self.box.lo, self.box.hi)]

    def points_weights(self) -> tuple[np.ndarray, np.ndarray]:
        rules = self.nodes_1d
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
        Z = np.column_stack([g.ravel() for g in grids])
        W = np.prod(np.column_stack([w.ravel() for w in wgrids]), axis=1)
        return Z, W


def _values(f, Z) -> np.ndarray:
    if callable(f):
        out = f(Z)
    else:
        out = f
    out = np.asarray(out, dtype=float)
    return out.reshape(len(Z), -1)


def moment_error(k: int, surrogate, reference, pdf: Pdf | None, rule: QuadratureRule,
                 domain: Domain | None = None) -> float:
    """``|| int rho (u^k - u~^k) dz ||_2`` by tensor quadrature.

    ``surrogate`` and ``reference`` are callables on an ``(n, d)`` batch or
    arrays already evaluated at the rule's points. The integrand is masked by
    the domain indicator when ``domain`` is given.
    """
    if k < 1:
        raise ValueError("moment order k must be >= 1")
    Z, W = rule.points_weights()
    u = _values(reference, Z)
    ut = _values(surrogate, Z)
    w = W * (pdf.density(Z) if pdf is not None else 1.0 / rule.box.volume)
    if domain is not None:
        w = w * domain.mask(Z)
    diff = u ** k - ut ** k
    return float(np.linalg.norm(w @ diff))


def mc_points(domain: Domain, n_mc: int, seed) -> np.ndarray:
    return domain.uniform(np.random.default_rng(seed), n_mc)


def mc_error(surrogate, reference, domain: Domain, n_mc: int = 5000, seed=0, points=None) -> float:
    """Mean 2-norm deviation over uniform draws from ``domain``."""
    if n_mc < 1:
        raise ValueError("n_mc must be >= 1")
    Z = mc_points(domain, n_mc, seed) if points is None else points
    d = _values(reference, Z) - _values(surrogate, Z)
    return float(np.mean(np.linalg.norm(d, axis=1)))


def ensemble_convergence(runs: list, metrics=None) -> dict:
    """Per-iteration ``(mean, min, max)`` of each metric across runs.

    ``runs`` is a list of histories (lists of records or of dicts); histories
    are truncated to the shortest. Returns ``{metric: (mean, lo, hi)}`` arrays.
    """
    if not runs:
        raise ValueError("no runs to aggregate")
    rows = [[r if isinstance(r, dict) else r.as_dict() for r in h] for h in runs]
    n = min(len(h) for h in rows)
    if metrics is None:
        metrics = [k for k, v in rows[0][0].items() if isinstance(v, (int, float)) and k != "iter"] if n else []
    out = {}
    for m in metrics:
        A = np.array([[float(h[i][m]) if h[i].get(m) is not None else np.nan for i in range(n)]
                      for h in rows]).reshape(len(rows), n)
        out[m] = (A.mean(axis=0), A.min(axis=0), A.max(axis=0))
    return out


# --- cached reference evaluations ---------------------------------------------

_MEMORY_CACHE: dict = {}


def _cache_key(model, Z) -> str:
    h = hashlib.sha256()
    h.update(model.cache_key().encode())
    h.update(np.ascontiguousarray(Z, dtype=float).tobytes())
    return h.hexdigest()


def reference_values(model, Z, cache_dir: str | None = None) -> np.ndarray:
    """Black-box QoI at ``Z``, memoised in memory and optionally on disk
    (``cache_dir`` or the ``NIPPAS_CACHE_DIR`` environment variable)."""
    Z = np.atleast_2d(np.asarray(Z, dtype=float))
    key = _cache_key(model, Z)
    if key in _MEMORY_CACHE:
        return _MEMORY_CACHE[key]
    cache_dir = cache_dir or os.environ.get("NIPPAS_CACHE_DIR")
    path = os.path.join(cache_dir, f"{key}.npy") if cache_dir else None
    if path and os.path.exists(path):
        vals = np.load(path)
    else:
        vals = np.asarray(model.qoi_batch(Z), dtype=float)
        if path:
            os.makedirs(cache_dir, exist_ok=True)
            tmp = f"{path}.{os.getpid()}.tmp"
            with open(tmp, "wb") as fh:
                np.save(fh, vals)
            os.replace(tmp, path)
    _MEMORY_CACHE[key] = vals
    return vals


@dataclass
class ErrorTracker:
    """Evaluates ``e`` (Monte-Carlo) and optionally ``e_rho^(1)``, ``e_rho^(2)``
    (quadrature) of a surrogate against black-box references.

    ``exact`` optionally adds ``e_exact``: the Monte-Carlo error against a
    closed-form solution instead of the discrete one.
    """

    model: object
    domain: Domain
    n_mc: int = 5000
    mc_seed: int = 12345
    pdf: Pdf | None = None
    quad_n: int = 0
    exact: object = None
    cache_dir: str | None = None
    _mc: tuple | None = field(default=None, repr=False)
    _quad: tuple | None = field(default=None, repr=False)

    def mc_reference(self):
        if self._mc is None:
            Z = mc_points(self.domain, self.n_mc, self.mc_seed)
            U = reference_values(self.model, Z, self.cache_dir)
            E = None if self.exact is None else np.asarray(self.exact(Z)).reshape(len(Z), -1)
            self._mc = (Z, U, E)
        return self._mc

    def quad_reference(self):
        if self._quad is None:
            rule = QuadratureRule(self.domain.box, self.quad_n)
            Z, W = rule.points_weights()
            m = self.domain.mask(Z)
            dens = self.pdf.density(Z) if self.pdf is not None else np.full(len(Z), 1.0 / self.domain.box.volume)
            w = W * dens * m
            keep = w != 0.0
            U = reference_values(self.model, Z[keep], self.cache_dir)
            self._quad = (Z[keep], w[keep], U)
        return self._quad

    def evaluate(self, state) -> dict:
        Z, U, E = self.mc_reference()
        Ut = state.eval_qoi(Z)
        out = {"e": float(np.mean(np.linalg.norm(U - Ut, axis=1)))}
        if E is not None:
            out["e_exact"] = float(np.mean(np.linalg.norm(E - Ut, axis=1)))
        if self.quad_n > 0:
            Zq, w, Uq = self.quad_reference()
            Utq = state.eval_qoi(Zq)
            out["e_rho1"] = float(np.linalg.norm(w @ (Uq - Utq)))
            out["e_rho2"] = float(np.linalg.norm(w @ (Uq ** 2 - Utq ** 2)))
        return out
