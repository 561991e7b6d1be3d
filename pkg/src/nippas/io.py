"""Run configuration files, surrogate dumps and CSV output.

Configuration is INI-style (``[section]`` headers with ``key = value``). The
surrogate dump is JSON; Python's float repr round-trips exactly.
"""

from __future__ import annotations

import configparser
import csv
import json
from dataclasses import dataclass

import numpy as np

from .analysis import ErrorTracker
from .basis import BasisSpec
from .distributions import make_pdf
from .driver import RunConfig
from .geometry import BoundingBox, make_domain
from .models import AnalyticToy, ShallowWaterDambreak, SteadyAdvectionDiffusion, UnsteadyAdvectionDiffusion
from .optimizer import SwarmConfig
from .residual import RefinementMeasure

DUMP_FORMAT = "nippas-surrogate"
DUMP_VERSION = 1
MODEL_NAMES = ("steady_ad", "unsteady_ad", "swe_dambreak", "analytic_toy")


class ConfigError(ValueError):
    def __init__(self, key: str, msg: str):
        self.key = key
        super().__init__(f"{key}: {msg}")


# --- config parsing -------------------------------------------------------------

class _Section:
    def __init__(self, cp: configparser.ConfigParser, name: str):
        self.name = name
        self.data = dict(cp[name]) if cp.has_section(name) else {}
        self.used: set = set()

    def raw(self, key, default=None):
        self.used.add(key)
        v = self.data.get(key)
        if v is None or v.strip().lower() in ("", "auto", "none"):
            return default
        return v.strip()

    def _conv(self, key, default, fn, what):
        v = self.raw(key)
        if v is None:
            return default
        try:
            return fn(v)
        except ValueError:
            raise ConfigError(f"{self.name}.{key}", f"expected {what}, got {v!r}") from None

    def str(self, key, default=None):
        return self.raw(key, default)

    def int(self, key, default=None):
        return self._conv(key, default, int, "an integer")

    def float(self, key, default=None):
        return self._conv(key, default, float, "a number")

    def floats(self, key, default=None):
        return self._conv(key, default, lambda v: tuple(float(x) for x in v.replace(";", ",").split(",")),
                          "a comma-separated list of numbers")

    def bool(self, key, default=False):
        v = self.raw(key)
        if v is None:
            return default
        if v.lower() in ("1", "true", "yes", "on"):
            return True
        if v.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{self.name}.{key}", f"expected a boolean, got {v!r}")

    def check_unused(self):
        extra = set(self.data) - self.used
        if extra:
            raise ConfigError(f"{self.name}.{sorted(extra)[0]}", "unknown key")


@dataclass
class ParsedConfig:
    run: RunConfig
    text: str
    seeds: dict


SECTIONS = ("model", "domain", "pdf", "run", "swarm", "errors")


def parse_config(text: str, *, seed: int | None = None) -> ParsedConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("config", f"malformed file: {exc}") from None
    for s in cp.sections():
        if s not in SECTIONS:
            raise ConfigError(s, f"unknown section; valid: {', '.join(SECTIONS)}")
    sec = {name: _Section(cp, name) for name in SECTIONS}

    dom_s = sec["domain"]
    kind = dom_s.str("kind")
    domain = None
    if kind is not None:
        try:
            domain = make_domain(kind, dom_s.floats("lo"), dom_s.floats("hi"))
        except ValueError as exc:
            raise ConfigError("domain.kind", str(exc)) from None

    model = _build_model(sec["model"], domain)
    domain = domain or model.domain

    pdf_s = sec["pdf"]
    pkind = pdf_s.str("kind")
    pdf = None
    if pkind is not None:
        try:
            pdf = make_pdf(pkind, domain=domain, alpha=pdf_s.floats("alpha"), beta=pdf_s.floats("beta"))
        except ValueError as exc:
            raise ConfigError("pdf.kind", str(exc)) from None

    sw = sec["swarm"]
    swarm = SwarmConfig(
        n_particles=sw.int("n_particles"), max_iters=sw.int("max_iters"),
        inertia=sw.float("inertia", 0.729), c1=sw.float("c1", 1.49445), c2=sw.float("c2", 1.49445),
        seed=sw.int("seed", 0), stall_iters=sw.int("stall_iters"), stall_tol=sw.float("stall_tol", 1e-12),
    )
    try:
        swarm.resolved(domain.dim)
    except ValueError as exc:
        raise ConfigError("swarm.n_particles", str(exc)) from None

    rs = sec["run"]
    file_seed = rs.int("seed", 0)
    run_seed = file_seed if seed is None else seed
    eps = rs.float("epsilon")
    if eps is not None and not eps > 0:
        raise ConfigError("run.epsilon", f"stopping threshold must be > 0, got {eps}")
    max_nodes = rs.int("max_nodes", 50)
    if max_nodes < 1:
        raise ConfigError("run.max_nodes", f"must be >= 1, got {max_nodes}")
    dd = rs.float("delta_dup")
    if dd is not None and not dd > 0:
        raise ConfigError("run.delta_dup", f"must be > 0, got {dd}")
    measure = rs.str("measure", "R")

    es = sec["errors"]
    tracker = None
    n_mc = es.int("n_mc", 0)
    quad_n = es.int("quad_n", 0)
    mc_seed = es.int("mc_seed", 12345)
    exact = es.bool("exact", False)
    if n_mc < 0 or quad_n < 0:
        raise ConfigError("errors.n_mc", "counts must be >= 0")
    if n_mc > 0 or quad_n > 0:
        exact_fn = getattr(model, "exact_qoi", None) if exact else None
        if exact and exact_fn is None:
            raise ConfigError("errors.exact", f"model {model.name} has no closed-form solution")
        tracker = ErrorTracker(model, domain, n_mc=max(n_mc, 1), mc_seed=mc_seed, pdf=pdf,
                               quad_n=quad_n, exact=exact_fn)

    for s in sec.values():
        s.check_unused()
    try:
        run_cfg = RunConfig(model, measure, pdf, domain, eps, max_nodes, dd, swarm, run_seed, tracker)
        RefinementMeasure(measure, model, domain, pdf)
    except ValueError as exc:
        raise ConfigError("run.measure", str(exc)) from None
    return ParsedConfig(run_cfg, text, {"run": run_seed, "swarm": swarm.seed, "mc": mc_seed})


def _build_model(s: _Section, domain):
    name = s.str("name")
    if name is None:
        raise ConfigError("model.name", f"required; valid: {', '.join(MODEL_NAMES)}")
    try:
        if name == "steady_ad":
            qoi = s.str("qoi", "mid")
            if qoi not in ("mid", "identity"):
                try:
                    qoi = int(qoi)
                except ValueError:
                    raise ConfigError("model.qoi", f"expected mid, identity or an index, got {qoi!r}") from None
            return SteadyAdvectionDiffusion(s.str("profile", "Re1"), s.int("n_pde", 999), qoi)
        if name == "unsteady_ad":
            return UnsteadyAdvectionDiffusion(s.str("scheme", "CN"), s.int("n_x", 256),
                                              s.float("dt", 1e-5), s.float("t_end", 1.0), domain)
        if name == "swe_dambreak":
            return ShallowWaterDambreak(s.int("n_cells", 2000), s.float("cfl", 0.45),
                                        s.float("max_speed", 6.0), s.float("t_end", 1.0))
        if name == "analytic_toy":
            return AnalyticToy(s.str("function", "linear"), domain)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("model", str(exc)) from None
    raise ConfigError("model.name", f"unknown model {name!r}; valid: {', '.join(MODEL_NAMES)}")


def load_config(path: str, *, seed: int | None = None) -> ParsedConfig:
    with open(path) as fh:
        return parse_config(fh.read(), seed=seed)


# --- surrogate dump ---------------------------------------------------------------

def dump_surrogate(state, samples, path: str):
    doc = {
        "format": DUMP_FORMAT,
        "version": DUMP_VERSION,
        "box": {"lo": list(state.box.lo), "hi": list(state.box.hi)},
        "indices": [list(m) for m in state.basis.indices],
        "coefficients": state.coeffs["u"].tolist(),
        "nodes": samples.nodes.tolist(),
        "values": samples.U.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)


@dataclass
class LoadedSurrogate:
    basis: BasisSpec
    coeffs: np.ndarray
    nodes: np.ndarray
    values: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.dim

    def __call__(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if Z.shape[1] != self.dim:
            raise ValueError(f"points have dimension {Z.shape[1]}, surrogate has {self.dim}")
        return self.basis.vandermonde(Z) @ self.coeffs


def load_surrogate(path: str) -> LoadedSurrogate:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != DUMP_FORMAT:
        raise ValueError(f"{path}: not a surrogate dump")
    if doc.get("version") != DUMP_VERSION:
        raise ValueError(f"{path}: unsupported dump version {doc.get('version')}")
    box = BoundingBox(tuple(doc["box"]["lo"]), tuple(doc["box"]["hi"]))
    basis = BasisSpec(box, tuple(tuple(m) for m in doc["indices"]))
    C = np.array(doc["coefficients"], dtype=float).reshape(len(basis), -1)
    return LoadedSurrogate(basis, C, np.array(doc["nodes"], dtype=float),
                           np.array(doc["values"], dtype=float))


# --- CSV --------------------------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17e}"


def write_csv(path: str, header: list, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def read_points(path: str) -> np.ndarray:
    """Numeric CSV, one point per row; a non-numeric first row is a header."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        return np.zeros((0, 0))
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        rows = rows[1:]
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: non-numeric entry ({exc})") from None


def history_rows(history, dim: int):
    metric_keys: list = []
    for rec in history:
        for k in rec.errors:
            if k not in metric_keys:
                metric_keys.append(k)
    header = (["iter", "n_nodes", "residual_max"] + [f"z_new_{i}" for i in range(dim)]
              + metric_keys + ["ill_conditioned"])
    rows = []
    for rec in history:
        z = list(rec.z_new) if rec.z_new is not None else [None] * dim
        rows.append([rec.iter, rec.n_nodes, rec.residual_max] + z
                    + [rec.errors.get(k) for k in metric_keys] + [rec.ill_conditioned])
    return header, rows


def write_history(path: str, history, dim: int):
    header, rows = history_rows(history, dim)
    write_csv(path, header, rows)
