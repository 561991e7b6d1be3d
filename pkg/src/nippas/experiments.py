"""Named convergence studies with desk-scale defaults.

Each study returns an :class:`ExperimentResult` holding the raw histories and
a summary, and writes CSV plot data when given an output directory. Desk
scale shrinks ensemble sizes, budgets and grid resolutions; ``full_scale``
restores the published settings.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

import numpy as np

from .analysis import ErrorTracker, ensemble_convergence
from .distributions import Dirichlet, pdf_grid_625
from .driver import RunConfig, boundary_counts, run
from .geometry import disc_domain, holes_domain, triangle_domain
from .io import write_csv
from .models import ShallowWaterDambreak, SteadyAdvectionDiffusion, UnsteadyAdvectionDiffusion

log = logging.getLogger(__name__)

PDF_SUBSET_SEED = 2024


@dataclass
class ExperimentResult:
    name: str
    summary: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)
    files: list = field(default_factory=list)


def metric_curve(history, key: str = "e") -> np.ndarray:
    return np.array([rec.errors.get(key, np.nan) for rec in history])


def nodes_to_reach(history, threshold: float, key: str = "e") -> int | None:
    for rec in history:
        if rec.errors.get(key, np.inf) < threshold:
            return rec.n_nodes
    return None


def pdf_subset(n: int) -> list:
    """``n`` members of the 625-element beta grid; all of them for ``n >= 625``."""
    grid = pdf_grid_625()
    if n >= len(grid):
        return grid
    idx = np.sort(np.random.default_rng(PDF_SUBSET_SEED).choice(len(grid), n, replace=False))
    return [grid[i] for i in idx]


def _out(out_dir, name):
    if out_dir is None:
        return None
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _padded(curves: list) -> np.ndarray:
    n = max(len(c) for c in curves)
    return np.array([np.pad(np.asarray(c, float), (0, n - len(c)), constant_values=np.nan)
                     for c in curves])


def _node_cdf_rows(label_cols, nodes):
    z = np.sort(np.asarray(nodes, float).ravel())
    n = len(z)
    return [list(label_cols) + [i + 1, z[i], (i + 1) / n] for i in range(n)]


# --- steady advection-diffusion ----------------------------------------------------

def ssad_measures(out_dir=None, *, full_scale=False, seed=0, max_nodes=None, n_mc=None,
                  n_pde=999, profiles=("Re1", "Re2", "Re3"), epsilon=1e-13) -> ExperimentResult:
    """R against R* with the full solution as QoI, for each Reynolds profile."""
    max_nodes = max_nodes or (60 if full_scale else 45)
    n_mc = n_mc or (5000 if full_scale else 2000)
    res = ExperimentResult("ssad-measures")
    cdf_rows = []
    for prof in profiles:
        model = SteadyAdvectionDiffusion(prof, n_pde, "identity")
        tracker = ErrorTracker(model, model.domain, n_mc=n_mc)
        runs = {}
        for meas in ("R", "R_star"):
            r = run(RunConfig(model, meas, epsilon=epsilon, max_nodes=max_nodes, seed=seed,
                              tracker=tracker))
            runs[meas] = r
            cdf_rows += _node_cdf_rows([prof, meas], r.samples.nodes)
        res.data[prof] = runs
        eR, eS = metric_curve(runs["R"].history), metric_curve(runs["R_star"].history)
        E = _padded([eR, eS])
        res.summary[prof] = {
            m: {"nodes_to_1e-6": nodes_to_reach(runs[m].history, 1e-6),
                "final_e": float(metric_curve(runs[m].history)[-1]),
                "near_lo_hi_at_30": [int(c[0]) for c in boundary_counts(runs[m].samples.nodes[:30],
                                                                         model.domain.box, 0.05)],
                "status": runs[m].status}
            for m in runs}
        path = _out(out_dir, f"ssad_measures_{prof}.csv")
        if path:
            write_csv(path, ["nodes", "e_R", "e_Rstar"],
                      [[i + 1, E[0, i], E[1, i]] for i in range(E.shape[1])])
            res.files.append(path)
    path = _out(out_dir, "ssad_measures_node_cdf.csv")
    if path:
        write_csv(path, ["profile", "measure", "rank", "z", "cdf"], cdf_rows)
        res.files.append(path)
    return res


def ssad_vs_ei(out_dir=None, *, full_scale=False, seed=0, n_seeds=5, max_nodes=None, n_mc=None,
               n_pde=999, epsilon=1e-14, threshold=1e-6) -> ExperimentResult:
    """NIPPAS residual against the empirical-interpolation residual, mid-grid QoI."""
    max_nodes = max_nodes or 60
    n_mc = n_mc or (5000 if full_scale else 2000)
    model = SteadyAdvectionDiffusion("Re1", n_pde, "mid")
    tracker = ErrorTracker(model, model.domain, n_mc=n_mc)
    res = ExperimentResult("ssad-vs-ei")
    rows = []
    counts = {"R": [], "R_EI": []}
    for s in range(seed, seed + n_seeds):
        curves = {}
        for meas in ("R", "R_EI"):
            r = run(RunConfig(model, meas, epsilon=epsilon, max_nodes=max_nodes, seed=s,
                              tracker=tracker))
            res.data[(s, meas)] = r
            curves[meas] = metric_curve(r.history)
            n = nodes_to_reach(r.history, threshold)
            # a run that never reaches the threshold is censored at budget + 1
            counts[meas].append(n if n is not None else max_nodes + 1)
        E = _padded([curves["R"], curves["R_EI"]])
        rows += [[s, i + 1, E[0, i], E[1, i]] for i in range(E.shape[1])]
    res.summary = {"threshold": threshold, "nodes_R": counts["R"], "nodes_R_EI": counts["R_EI"],
                   "mean_R": float(np.mean(counts["R"])), "mean_R_EI": float(np.mean(counts["R_EI"]))}
    path = _out(out_dir, "ssad_vs_ei.csv")
    if path:
        write_csv(path, ["seed", "nodes", "e_R", "e_REI"], rows)
        res.files.append(path)
    return res


# --- unsteady advection-diffusion -----------------------------------------------------

def uad_schemes(out_dir=None, *, full_scale=False, seed=0, max_nodes=None, n_mc=None,
                epsilon=1e-14) -> ExperimentResult:
    """Error against the discrete and the analytic solution for BE, CN and RK4."""
    if full_scale:
        settings = {"BE": (256, 1e-5), "CN": (256, 1e-5), "RK4": (256, 1e-5)}
    else:
        # RK4 is unstable at dt=1e-3 on 64 modes; 4e-4 is the nearest stable step dividing 1
        settings = {"BE": (64, 1e-3), "CN": (64, 1e-3), "RK4": (64, 4e-4)}
    max_nodes = max_nodes or (100 if full_scale else 40)
    n_mc = n_mc or (5000 if full_scale else 2000)
    res = ExperimentResult("uad-schemes")
    cols, curves = [], []
    for scheme, (n_x, dt) in settings.items():
        model = UnsteadyAdvectionDiffusion(scheme, n_x, dt)
        tracker = ErrorTracker(model, model.domain, n_mc=n_mc, exact=model.exact_qoi)
        r = run(RunConfig(model, "R", epsilon=epsilon, max_nodes=max_nodes, seed=seed, tracker=tracker))
        res.data[scheme] = r
        e, ex = metric_curve(r.history), metric_curve(r.history, "e_exact")
        # discretisation error of the black box itself, on the same Monte-Carlo points
        _, U, E = tracker.mc_reference()
        disc = float(np.mean(np.linalg.norm(U - E, axis=1)))
        res.summary[scheme] = {"n_x": n_x, "dt": dt, "final_e": float(e[-1]),
                               "final_e_exact": float(ex[-1]), "discretisation_error": disc,
                               "status": r.status}
        cols += [f"e_{scheme}", f"e_exact_{scheme}"]
        curves += [e, ex]
    E = _padded(curves)
    path = _out(out_dir, "uad_schemes.csv")
    if path:
        write_csv(path, ["nodes"] + cols, [[i + 1] + list(E[:, i]) for i in range(E.shape[1])])
        res.files.append(path)
    return res


def uad_pdf_study(out_dir=None, *, full_scale=False, seed=0, n_pdfs=None, max_nodes=None,
                  n_mc=None, quad_n=100, epsilon=1e-14, n_x=None, dt=None) -> ExperimentResult:
    """R against R_rho over an ensemble of beta densities."""
    n_pdfs = n_pdfs or (625 if full_scale else 25)
    max_nodes = max_nodes or (100 if full_scale else 40)
    n_mc = n_mc or (5000 if full_scale else 2000)
    n_x = n_x or (256 if full_scale else 64)
    dt = dt or (1e-5 if full_scale else 1e-3)
    model = UnsteadyAdvectionDiffusion("CN", n_x, dt)
    res = ExperimentResult("uad-pdf-study")
    hist = {"R": [], "R_rho": []}
    for pdf in pdf_subset(n_pdfs):
        tracker = ErrorTracker(model, model.domain, n_mc=n_mc, pdf=pdf, quad_n=quad_n)
        for meas in hist:
            r = run(RunConfig(model, meas, pdf=pdf, epsilon=epsilon, max_nodes=max_nodes,
                              seed=seed, tracker=tracker))
            hist[meas].append(r.history)
    res.data = dict(hist)
    metrics = ("e", "e_rho1", "e_rho2")
    for meas, runs in hist.items():
        env = ensemble_convergence(runs, metrics)
        final = {m: float(np.mean([h[-1].errors[m] for h in runs])) for m in metrics}
        res.summary[meas] = {"final_mean": final, "n_runs": len(runs)}
        for m in metrics:
            mean, lo, hi = env[m]
            path = _out(out_dir, f"uad_pdf_{m}_{meas}.csv")
            if path:
                write_csv(path, ["iter", "mean", "lo", "hi"],
                          [[i + 1, mean[i], lo[i], hi[i]] for i in range(len(mean))])
                res.files.append(path)
        res.data[f"envelope_{meas}"] = env
    return res


def uad_domains(out_dir=None, *, full_scale=False, seed=0, max_nodes=None, n_mc=None,
                epsilon=1e-14, n_x=None, dt=None) -> ExperimentResult:
    """Convergence on the triangle, disc and holed square."""
    max_nodes = max_nodes or (100 if full_scale else 60)
    n_mc = n_mc or (5000 if full_scale else 2000)
    n_x = n_x or (256 if full_scale else 64)
    dt = dt or (1e-5 if full_scale else 1e-3)
    res = ExperimentResult("uad-domains")
    for domain in (triangle_domain(), disc_domain(), holes_domain()):
        model = UnsteadyAdvectionDiffusion("CN", n_x, dt, domain=domain)
        tracker = ErrorTracker(model, domain, n_mc=n_mc)
        r = run(RunConfig(model, "R", epsilon=epsilon, max_nodes=max_nodes, seed=seed, tracker=tracker))
        res.data[domain.kind] = r
        e = metric_curve(r.history)
        outside = int(np.count_nonzero(~domain.mask(r.samples.nodes)))
        res.summary[domain.kind] = {"e": [float(v) for v in e], "nodes_outside": outside,
                                    "status": r.status, "resyncs": r.state.resyncs}
        path = _out(out_dir, f"uad_domains_{domain.kind}.csv")
        if path:
            write_csv(path, ["nodes", "e"], [[i + 1, v] for i, v in enumerate(e)])
            res.files.append(path)
            path = _out(out_dir, f"uad_domains_{domain.kind}_nodes.csv")
            write_csv(path, ["index", "z1", "z2"],
                      [[i, *z] for i, z in enumerate(r.samples.nodes)])
            res.files.append(path)
    return res


# --- shallow water ---------------------------------------------------------------------

def swe_dambreak(out_dir=None, *, full_scale=False, seed=0, max_nodes=None, n_mc=None,
                 quad_n=None, n_cells=None, epsilon=1e-14) -> ExperimentResult:
    """R against R_rho for the dambreak with Dirichlet(5, 2, 2) inputs."""
    n_cells = n_cells or (2000 if full_scale else 500)
    max_nodes = max_nodes or 60
    n_mc = n_mc or (5000 if full_scale else 1000)
    quad_n = quad_n or (100 if full_scale else 40)
    model = ShallowWaterDambreak(n_cells)
    pdf = Dirichlet((5.0, 2.0, 2.0))
    res = ExperimentResult("swe-dambreak")
    s0 = model.trivial_point()
    res.summary["trivial_point"] = {"s": [float(v) for v in s0],
                                    "u": float(model.sample(np.clip(s0, 0.0, 1.0)).u[0])}
    cols, curves = [], []
    for meas in ("R", "R_rho"):
        tracker = ErrorTracker(model, model.domain, n_mc=n_mc, pdf=pdf, quad_n=quad_n)
        r = run(RunConfig(model, meas, pdf=pdf, epsilon=epsilon, max_nodes=max_nodes, seed=seed,
                          tracker=tracker))
        res.data[meas] = r
        final = r.history[-1].errors
        res.summary[meas] = {"final": dict(final), "status": r.status, "n_nodes": len(r.samples),
                             "resyncs": r.state.resyncs}
        for m in ("e", "e_rho1", "e_rho2"):
            cols.append(f"{m}_{meas}")
            curves.append(metric_curve(r.history, m))
        path = _out(out_dir, f"swe_dambreak_{meas}_nodes.csv")
        if path:
            amb = model.chart.map(r.samples.nodes)
            write_csv(path, ["index", "s1", "s2", "g", "h_l", "v_l"],
                      [[i, *s, *a] for i, (s, a) in enumerate(zip(r.samples.nodes, amb))])
            res.files.append(path)
    E = _padded(curves)
    path = _out(out_dir, "swe_dambreak.csv")
    if path:
        write_csv(path, ["nodes"] + cols, [[i + 1] + list(E[:, i]) for i in range(E.shape[1])])
        res.files.append(path)
    return res


EXPERIMENTS = {
    "ssad-measures": ssad_measures,
    "ssad-vs-ei": ssad_vs_ei,
    "uad-schemes": uad_schemes,
    "uad-pdf-study": uad_pdf_study,
    "uad-domains": uad_domains,
    "swe-dambreak": swe_dambreak,
}


def run_experiment(name: str, out_dir=None, **kw) -> ExperimentResult:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}; valid: {', '.join(EXPERIMENTS)}")
    return EXPERIMENTS[name](out_dir, **kw)
