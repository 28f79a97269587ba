"""Seeded simulation experiments: tuning, sweeps, comparisons, lemma checks.

Every trial is a pure function of ``(config, n, threshold, alpha, kind,
trial index, purpose)``. The per-trial seed depends only on the master seed,
the purpose (evaluation or tuning) and the trial index, so the same trial
index sees the same graph and ground truth at every sample size and every
threshold, and both estimators see identical data.
"""

from __future__ import annotations

import json
import logging
import math
import os
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache

import numpy as np

from . import bounds
from .errors import ConfigError, InvalidArgumentError, LapRegError
from .graph import generate_geometric_graph, identity_spectrum, laplacian
from .report import write_csv, write_line_plot
from .solver import LAPLACIAN, RIDGE, SpectralSolver
from .synth import block_rng, dump_instance, make_instance

__all__ = [
    "ExperimentConfig",
    "TrialRow",
    "SWEEP_N_HEADER",
    "load_config",
    "trial_seed",
    "run_trial",
    "tune_alpha",
    "sweep_sample_size",
    "compare_estimators",
    "sweep_density",
    "check_lemmas",
    "EmptyResultError",
    "TuningResult",
    "write_tuning_table",
    "sign_test_pvalue",
    "simulate",
    "with_overrides",
]

log = logging.getLogger(__name__)

KINDS = (LAPLACIAN, RIDGE)
EVAL, TUNE = 0, 1
_PURPOSES = {"eval": EVAL, "tune": TUNE}

SWEEP_N_HEADER = (
    "kind", "n", "alpha", "trial", "empirical_error", "bound_value", "lambda2", "kappa",
    "misalignment", "assumption1_ratio", "residual", "trial_seed", "status",
)


class EmptyResultError(LapRegError):
    """Every grid point of a sweep was skipped."""


def _default_alpha_grid():
    return tuple(float(a) for a in np.logspace(-6, 2, 20))


@dataclass(frozen=True)
class ExperimentConfig:
    m: int = 100
    k: int = 10
    n_grid: tuple = tuple(range(100, 1001, 100))
    sigma: float = math.sqrt(5.0)
    bandwidth: float = 0.5
    threshold_grid: tuple = (0.0,)
    alpha_grid: tuple = field(default_factory=_default_alpha_grid)
    D: float = 2.0
    trials: int = 20
    master_seed: int = 0
    out_dir: str = "results"

    def __post_init__(self):
        for name in ("n_grid", "threshold_grid", "alpha_grid"):
            value = getattr(self, name)
            if isinstance(value, (int, float)):
                value = (value,)
            object.__setattr__(self, name, tuple(value))
        try:
            object.__setattr__(self, "n_grid", tuple(int(v) for v in self.n_grid))
            object.__setattr__(self, "threshold_grid", tuple(float(v) for v in self.threshold_grid))
            object.__setattr__(self, "alpha_grid", tuple(float(v) for v in self.alpha_grid))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"grids must hold numbers: {exc}") from exc
        if self.m < 2 or self.k < 1:
            raise ConfigError(f"need m >= 2 and k >= 1, got m={self.m}, k={self.k}")
        for name in ("n_grid", "threshold_grid", "alpha_grid"):
            grid = getattr(self, name)
            if not grid:
                raise ConfigError(f"{name} must be non-empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ConfigError(f"{name} must be strictly ascending")
        if self.n_grid[0] < self.k:
            raise ConfigError(f"every n must be >= k={self.k}")
        if self.alpha_grid[0] <= 0:
            raise ConfigError("alpha_grid entries must be positive")
        if not all(0 <= t < 1 for t in self.threshold_grid):
            raise ConfigError("thresholds must lie in [0, 1)")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.sigma >= 0 or not self.bandwidth > 0:
            raise ConfigError("need sigma >= 0 and bandwidth > 0")
        if not self.D >= 2:
            raise ConfigError("D must be >= 2")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must be an unsigned 64-bit integer")

    @property
    def reference_n(self) -> int:
        """Sample size used by single-``n`` experiments: the grid point nearest 500."""
        return min(self.n_grid, key=lambda v: (abs(v - 500), v))


def load_config(path=None, **overrides) -> ExperimentConfig:
    """Read a JSON object of config fields; unknown keys raise :class:`ConfigError`.

    Missing keys take their defaults. ``overrides`` with value ``None`` are
    ignored.
    """
    data = {}
    if path is not None:
        try:
            with open(path) as f:
                data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    try:
        return ExperimentConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def trial_seed(master_seed, trial, purpose="eval") -> int:
    """64-bit seed of one trial, derived from the master seed."""
    ss = np.random.SeedSequence([int(master_seed), _PURPOSES[purpose], int(trial)])
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


# Instance construction ========================================================
@lru_cache(maxsize=64)
def _spectrum(m, bandwidth, threshold, seed):
    g = generate_geometric_graph(m, bandwidth, threshold, block_rng(seed, "graph"))
    return laplacian(g)


@lru_cache(maxsize=64)
def _instance(m, k, n, sigma, bandwidth, seed, theta_prior):
    # ground truth always comes from the complete (threshold 0) graph
    s = _spectrum(m, bandwidth, 0.0, seed)
    theta = None
    if theta_prior == "iid":
        scale = math.sqrt(np.mean(1.0 / s.eigenvalues[1:]) * (m - 1) / m)
        theta = scale * block_rng(seed, "theta").standard_normal((m, k))
    elif theta_prior != "smooth":
        raise InvalidArgumentError(f"unknown theta prior {theta_prior!r}")
    return make_instance(s, k, n, sigma, seed=seed, theta_star=theta)


def _penalty(config, threshold, seed, kind, estimator_graph):
    if kind == RIDGE:
        return None
    if estimator_graph == "identity":
        return identity_spectrum(config.m)
    if estimator_graph != "data":
        raise InvalidArgumentError(f"unknown estimator graph {estimator_graph!r}")
    return _spectrum(config.m, config.bandwidth, threshold, seed)


@dataclass(frozen=True)
class TrialRow:
    kind: str
    n: int
    alpha: float
    trial: int
    empirical_error: float
    bound_value: float
    lambda2: float
    kappa: float
    misalignment: float
    assumption1_ratio: float
    residual: float
    trial_seed: int
    status: str = "ok"
    threshold: float = 0.0
    report: object = field(default=None, repr=False, compare=False)

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "report"}


def _error_row(kind, n, alpha, trial, seed, threshold, exc):
    nan = float("nan")
    status = f"error:{type(exc).__name__}"
    log.warning("trial %s (seed %s) failed: %s", trial, seed, exc)
    return TrialRow(kind, n, alpha, trial, nan, nan, nan, nan, nan, nan, nan, seed, status, threshold)


def _report_row(config, inst, s_data, penalty, estimate, kind, n, trial, seed, threshold):
    kappa = bounds.kappa_from_sigma(inst.Sigma)
    r = min(config.m, config.k)
    alpha = estimate.config.alpha
    if penalty is None:
        ing = bounds.ridge_ingredients(alpha, r, inst.theta_star, kappa)
    else:
        ing = bounds.theorem1_bound(alpha, r, penalty, inst.theta_star, kappa)
    rep = bounds.empirical_vs_bound(inst, estimate, ing, s_data, config.D)
    return TrialRow(
        kind, n, alpha, trial, rep.empirical_error, rep.bound_value, ing.lambda2, kappa,
        ing.smoothness_misalignment, rep.lemmas.assumption1_ratio, rep.stationarity_residual,
        seed, "ok", threshold, rep,
    )


def run_trial(config: ExperimentConfig, n, threshold, alpha, kind, trial, *, purpose="eval",
              estimator_graph="data", theta_prior="smooth") -> TrialRow:
    """Generate, solve and score one trial.

    Library errors never escape: they come back as a row whose ``status``
    names the exception.
    """
    seed = trial_seed(config.master_seed, trial, purpose)
    try:
        s_data = _spectrum(config.m, config.bandwidth, threshold, seed)
        if not s_data.connected:
            raise InvalidArgumentError(f"graph at threshold {threshold} is disconnected")
        inst = _instance(config.m, config.k, n, config.sigma, config.bandwidth, seed, theta_prior)
        penalty = _penalty(config, threshold, seed, kind, estimator_graph)
        est = SpectralSolver(inst.Y, inst.X, penalty).solve(alpha)
        return _report_row(config, inst, s_data, penalty, est, kind, n, trial, seed, threshold)
    except LapRegError as exc:
        return _error_row(kind, n, alpha, trial, seed, threshold, exc)


def _errors_over_grid(config, n, threshold, kind, trial, purpose, estimator_graph, theta_prior):
    seed = trial_seed(config.master_seed, trial, purpose)
    inst = _instance(config.m, config.k, n, config.sigma, config.bandwidth, seed, theta_prior)
    penalty = _penalty(config, threshold, seed, kind, estimator_graph)
    solver = SpectralSolver(inst.Y, inst.X, penalty)
    return [float(np.linalg.norm(solver.solve(a).theta_hat - inst.theta_star)) for a in config.alpha_grid]


@dataclass(frozen=True)
class TuningResult:
    kind: str
    n: int
    best_alpha: float
    alphas: tuple
    mean_errors: tuple


def tune_alpha(config: ExperimentConfig, kind, n, *, threshold=None, estimator_graph="data",
               theta_prior="smooth") -> TuningResult:
    """Pick the ``alpha_grid`` entry with the smallest mean error over
    ``config.trials`` tuning instances (disjoint from evaluation trials).

    Ties go to the smaller ``alpha``.
    """
    threshold = config.threshold_grid[0] if threshold is None else threshold
    errs = np.array([
        _errors_over_grid(config, n, threshold, kind, t, "tune", estimator_graph, theta_prior)
        for t in range(config.trials)
    ])
    mean = errs.mean(axis=0)
    best = int(np.argmin(mean))  # first minimum, hence smallest alpha on ties
    return TuningResult(kind, n, config.alpha_grid[best], config.alpha_grid, tuple(float(v) for v in mean))


def write_tuning_table(result: TuningResult, path) -> None:
    rows = [
        {"kind": result.kind, "n": result.n, "alpha": a, "mean_error": e, "best": a == result.best_alpha}
        for a, e in zip(result.alphas, result.mean_errors)
    ]
    write_csv(path, ("kind", "n", "alpha", "mean_error", "best"), rows)


# Output helpers ===============================================================
def _prepare_out_dir(out_dir):
    """Create ``out_dir`` and prove it writable before any computation."""
    os.makedirs(out_dir, exist_ok=True)
    probe = os.path.join(out_dir, ".write-test")
    with open(probe, "w") as f:
        f.write("")
    os.remove(probe)


def _mean_std(values):
    v = np.array([x for x in values if math.isfinite(x)])
    if v.size == 0:
        return float("nan"), float("nan")
    return float(v.mean()), float(v.std(ddof=1)) if v.size > 1 else 0.0


def _sorted_rows(rows):
    return sorted(rows, key=lambda r: (KINDS.index(r.kind), r.n, r.threshold, r.trial))


@dataclass
class SweepResult:
    rows: list
    summary: list
    paths: dict
    tuned: dict = field(default_factory=dict)


# Experiments ==================================================================
def sweep_sample_size(config: ExperimentConfig, kinds=KINDS) -> SweepResult:
    """Error and bound versus ``n`` for each estimator at its tuned ``alpha``.

    Writes ``sweep_n.csv`` (one row per trial), ``sweep_n_summary.csv``
    (mean and standard deviation per ``(kind, n)``) and one
    ``sweep_n_<kind>.svg`` per estimator.
    """
    _prepare_out_dir(config.out_dir)
    threshold = config.threshold_grid[0]
    rows, summary, tuned = [], [], {}
    for kind in kinds:
        for n in config.n_grid:
            tr = tune_alpha(config, kind, n, threshold=threshold)
            tuned[kind, n] = tr.best_alpha
            block = [run_trial(config, n, threshold, tr.best_alpha, kind, t) for t in range(config.trials)]
            rows.extend(block)
            err_mean, err_std = _mean_std([r.empirical_error for r in block])
            b_mean, b_std = _mean_std([r.bound_value for r in block])
            ok = [r for r in block if r.status == "ok"]
            summary.append({
                "kind": kind, "n": n, "alpha": tr.best_alpha,
                "error_mean": err_mean, "error_std": err_std,
                "bound_mean": b_mean, "bound_std": b_std,
                "bound_holds_fraction": sum(r.bound_value >= r.empirical_error for r in ok) / max(len(ok), 1),
                "ok_trials": len(ok),
            })
    rows = _sorted_rows(rows)
    paths = {"csv": os.path.join(config.out_dir, "sweep_n.csv"),
             "summary": os.path.join(config.out_dir, "sweep_n_summary.csv")}
    write_csv(paths["csv"], SWEEP_N_HEADER, [r.as_dict() for r in rows])
    write_csv(paths["summary"], tuple(summary[0]), summary)
    for kind in kinds:
        part = [s for s in summary if s["kind"] == kind]
        path = os.path.join(config.out_dir, f"sweep_n_{kind}.svg")
        write_line_plot(
            path, [s["n"] for s in part],
            {"empirical": [s["error_mean"] for s in part], "theoretical": [s["bound_mean"] for s in part]},
            title=f"{kind} estimator", xlabel="sample size n", ylabel="||Theta_hat - Theta*||_F",
        )
        paths[f"plot_{kind}"] = path
    return SweepResult(rows, summary, paths, tuned)


def sign_test_pvalue(wins, losses) -> float:
    """Two-sided exact sign test, ties dropped."""
    total = wins + losses
    if total == 0:
        return 1.0
    tail = sum(math.comb(total, i) for i in range(min(wins, losses) + 1)) / 2**total
    return min(1.0, 2 * tail)


def compare_estimators(config: ExperimentConfig, n=None, *, estimator_graph="data",
                       theta_prior="smooth", write=True) -> SweepResult:
    """Paired comparison of both estimators at their tuned ``alpha``.

    Both kinds see the same data in every trial. ``estimator_graph="identity"``
    hands ``I_m`` to the Laplacian estimator; ``theta_prior="iid"`` draws a
    ground truth with independent rows instead of a graph-smooth one.
    """
    if write:
        _prepare_out_dir(config.out_dir)
    n = config.reference_n if n is None else n
    threshold = config.threshold_grid[0]
    opts = dict(estimator_graph=estimator_graph, theta_prior=theta_prior)
    a_lap = tune_alpha(config, LAPLACIAN, n, threshold=threshold, **opts).best_alpha
    a_ridge = tune_alpha(config, RIDGE, n, threshold=threshold, **opts).best_alpha
    rows = []
    for t in range(config.trials):
        lap = run_trial(config, n, threshold, a_lap, LAPLACIAN, t, **opts)
        rid = run_trial(config, n, threshold, a_ridge, RIDGE, t, **opts)
        ok = lap.status == "ok" and rid.status == "ok"
        rows.append({
            "trial": t, "n": n, "alpha_laplacian": a_lap, "alpha_ridge": a_ridge,
            "error_laplacian": lap.empirical_error, "error_ridge": rid.empirical_error,
            "difference": lap.empirical_error - rid.empirical_error,
            "trial_seed": lap.trial_seed, "status": "ok" if ok else lap.status if lap.status != "ok" else rid.status,
        })
    diffs = [r["difference"] for r in rows if r["status"] == "ok"]
    wins = sum(d < 0 for d in diffs)
    losses = sum(d > 0 for d in diffs)
    summary = [{
        "n": n, "alpha_laplacian": a_lap, "alpha_ridge": a_ridge,
        "mean_error_laplacian": _mean_std([r["error_laplacian"] for r in rows])[0],
        "mean_error_ridge": _mean_std([r["error_ridge"] for r in rows])[0],
        "mean_difference": float(np.mean(diffs)) if diffs else float("nan"),
        "laplacian_wins": wins, "ridge_wins": losses, "ties": len(diffs) - wins - losses,
        "sign_test_p": sign_test_pvalue(wins, losses),
        "estimator_graph": estimator_graph, "theta_prior": theta_prior,
    }]
    paths = {}
    if write:
        paths = {"csv": os.path.join(config.out_dir, "compare.csv"),
                 "summary": os.path.join(config.out_dir, "compare_summary.csv")}
        write_csv(paths["csv"], tuple(rows[0]), rows)
        write_csv(paths["summary"], tuple(summary[0]), summary)
    return SweepResult(rows, summary, paths, {LAPLACIAN: a_lap, RIDGE: a_ridge})


def sweep_density(config: ExperimentConfig, n=None) -> SweepResult:
    """Fiedler value, error and bound of the Laplacian estimator per threshold.

    The ground truth is always drawn on the complete graph; only the
    estimator's graph is sparsified. Disconnected graphs are skipped with
    status ``disconnected``.

    Raises
    ------
    EmptyResultError
        If every threshold yields only disconnected graphs.
    """
    _prepare_out_dir(config.out_dir)
    n = config.reference_n if n is None else n
    rows, summary = [], []
    for threshold in config.threshold_grid:
        seeds = [trial_seed(config.master_seed, t) for t in range(config.trials)]
        connected = [_spectrum(config.m, config.bandwidth, threshold, s).connected for s in seeds]
        alpha = float("nan")
        if any(connected):
            alpha = tune_alpha(config, LAPLACIAN, n, threshold=threshold).best_alpha
        block = []
        for t, (seed, conn) in enumerate(zip(seeds, connected)):
            if conn:
                r = run_trial(config, n, threshold, alpha, LAPLACIAN, t)
            else:
                nan = float("nan")
                r = TrialRow(LAPLACIAN, n, alpha, t, nan, nan,
                             float(_spectrum(config.m, config.bandwidth, threshold, seed).eigenvalues[1]),
                             nan, nan, nan, nan, seed, "disconnected", threshold)
            block.append(r)
        rows.extend(block)
        ok = [r for r in block if r.status == "ok"]
        summary.append({
            "threshold": threshold, "n": n, "alpha": alpha,
            "lambda2_mean": _mean_std([r.lambda2 for r in ok])[0],
            "error_mean": _mean_std([r.empirical_error for r in ok])[0],
            "bound_mean": _mean_std([r.bound_value for r in ok])[0],
            "misalignment_mean": _mean_std([r.misalignment for r in ok])[0],
            "connected_trials": len(ok),
        })
    if not any(s["connected_trials"] for s in summary):
        raise EmptyResultError("every threshold produced disconnected graphs")
    header = ("threshold", "trial", "n", "alpha", "lambda2", "empirical_error", "bound_value",
              "misalignment", "trial_seed", "status")
    paths = {"csv": os.path.join(config.out_dir, "sweep_density.csv"),
             "summary": os.path.join(config.out_dir, "sweep_density_summary.csv")}
    write_csv(paths["csv"], header, [r.as_dict() for r in rows])
    write_csv(paths["summary"], tuple(summary[0]), summary)
    return SweepResult(rows, summary, paths)


LEMMA_HEADER = (
    "trial", "n", "alpha", "lemma1_lhs", "lemma1_exact_rhs", "lemma1_approx_rhs", "lemma1_exact_ok",
    "lemma1_approx_ok", "assumption1_ratio", "lemma2_lhs", "lemma2_lhs_op", "lemma2_rhs", "lemma2_ok",
    "lemma3_min", "lemma3_max", "lemma3_ok", "realized_kappa", "trial_seed", "status",
)


def check_lemmas(config: ExperimentConfig, n=None) -> SweepResult:
    """Lemma diagnostics for the Laplacian estimator at the smallest admissible ``alpha``.

    Writes ``check_lemmas.csv`` (one row per trial) and
    ``check_lemmas_summary.csv`` (``metric,value`` pairs). The gradient
    concentration inequality is reported, not asserted.
    """
    _prepare_out_dir(config.out_dir)
    n = config.reference_n if n is None else n
    alpha = bounds.recommended_alpha(config.sigma, config.D, config.m, config.k, n)
    if alpha == 0:
        alpha = config.alpha_grid[0]
    threshold = config.threshold_grid[0]
    rows = []
    for t in range(config.trials):
        r = run_trial(config, n, threshold, alpha, LAPLACIAN, t)
        if r.status != "ok":
            rows.append({h: float("nan") for h in LEMMA_HEADER} | {
                "trial": t, "n": n, "alpha": alpha, "trial_seed": r.trial_seed, "status": r.status})
            continue
        lem = r.report.lemmas
        rows.append({
            "trial": t, "n": n, "alpha": alpha,
            "lemma1_lhs": lem.lemma1_lhs, "lemma1_exact_rhs": lem.lemma1_exact_rhs,
            "lemma1_approx_rhs": lem.lemma1_approx_rhs,
            "lemma1_exact_ok": lem.lemma1_exact_holds, "lemma1_approx_ok": lem.lemma1_approx_holds,
            "assumption1_ratio": lem.assumption1_ratio,
            "lemma2_lhs": lem.lemma2_lhs, "lemma2_lhs_op": lem.lemma2_lhs_op, "lemma2_rhs": lem.lemma2_rhs,
            "lemma2_ok": lem.lemma2_holds,
            "lemma3_min": lem.lemma3_min, "lemma3_max": lem.lemma3_max, "lemma3_ok": lem.lemma3_event,
            "realized_kappa": r.report.realized_kappa, "trial_seed": r.trial_seed, "status": "ok",
        })
    ok = [r for r in rows if r["status"] == "ok"]
    count = max(len(ok), 1)
    ratios = np.array([r["assumption1_ratio"] for r in ok]) if ok else np.array([np.nan])
    summary = [
        ("trials_ok", len(ok)),
        ("lemma1_exact_frequency", sum(r["lemma1_exact_ok"] for r in ok) / count),
        ("lemma1_approx_frequency", sum(r["lemma1_approx_ok"] for r in ok) / count),
        ("assumption1_ratio_mean", float(np.mean(ratios))),
        ("assumption1_ratio_median", float(np.median(ratios))),
        ("assumption1_ratio_max", float(np.max(ratios))),
        ("lemma2_violation_frequency", sum(not r["lemma2_ok"] for r in ok) / count),
        ("lemma2_lhs_mean", _mean_std([r["lemma2_lhs"] for r in ok])[0]),
        ("lemma2_rhs", bounds.recommended_alpha(config.sigma, config.D, config.m, config.k, n)),
        ("lemma3_frequency", sum(r["lemma3_ok"] for r in ok) / count),
        ("lemma2_reading", bounds.LEMMA2_NOTE),
    ]
    paths = {"csv": os.path.join(config.out_dir, "check_lemmas.csv"),
             "summary": os.path.join(config.out_dir, "check_lemmas_summary.csv")}
    write_csv(paths["csv"], LEMMA_HEADER, rows)
    write_csv(paths["summary"], ("metric", "value"), summary)
    return SweepResult(rows, [dict(summary)], paths)


def simulate(config: ExperimentConfig, n=None, alpha=None, kind=LAPLACIAN, trial=0) -> SweepResult:
    """One trial written as a single-row ``simulate.csv``; also dumps the instance."""
    _prepare_out_dir(config.out_dir)
    n = config.reference_n if n is None else n
    if alpha is None:
        alpha = bounds.recommended_alpha(config.sigma, config.D, config.m, config.k, n) or config.alpha_grid[0]
    threshold = config.threshold_grid[0]
    row = run_trial(config, n, threshold, alpha, kind, trial)
    path = os.path.join(config.out_dir, "simulate.csv")
    write_csv(path, SWEEP_N_HEADER, [row.as_dict()])
    paths = {"csv": path}
    if row.status == "ok":
        inst = _instance(config.m, config.k, n, config.sigma, config.bandwidth, row.trial_seed, "smooth")
        paths["instance"] = os.path.join(config.out_dir, "instance")
        dump_instance(inst, paths["instance"], bandwidth=config.bandwidth, threshold=threshold)
    return SweepResult([row], [], paths)


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    """Copy of ``config`` with non-``None`` fields replaced."""
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
