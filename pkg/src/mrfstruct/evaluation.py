"""Edge-recovery metrics and the learner-by-threshold sweep harness.

A sweep runs every (learner, lambda) cell over ``n_runs`` independently
seeded datasets from one generator. Cells fail independently: an exception
inside one cell is recorded on that cell and the rest continue, but a sweep
where more than ``max_failed_frac`` of cells failed raises ``SweepError``.
Mean ROC points per (learner, lambda) and a trapezoid AUC per learner are
derived from the successful cells only.

Output files (``cells.csv``, ``curves.csv``, ``summary.json``) are
deterministic byte-for-byte given the same inputs; per-cell wall time is
collected only on request since it would break that property.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import EdgeSet
from .estimators import CachedEstimator, EstimatorConfig
from .io import fmt_float, write_text_atomic
from .learners import LEARNERS, LearnerConfig, learn
from .synthgen import GeneratorSpec, generate

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


class SweepError(RuntimeError):
    """Too many sweep cells failed to trust the aggregate results."""


@dataclass(frozen=True)
class RecoveryMetrics:
    """True/false positive rates of a predicted edge set against truth."""

    tpr: float
    fpr: float
    n_true: int
    n_predicted: int


def recovery(predicted: EdgeSet, truth: EdgeSet) -> RecoveryMetrics:
    """Edgewise recovery rates.

    TPR is recovered true edges over true edges; with an empty truth it is
    1.0 exactly when nothing was predicted. FPR is spurious edges over
    non-edges of the truth, 0.0 when the truth is complete.
    """
    if predicted.d != truth.d:
        raise ValueError(
            f"edge sets disagree on D: predicted {predicted.d}, truth {truth.d}"
        )
    pred = predicted.edges
    true = truth.edges
    hits = len(pred & true)
    if true:
        tpr = hits / len(true)
    else:
        tpr = 1.0 if not pred else 0.0
    possible = predicted.d * (predicted.d - 1) // 2
    denom = possible - len(true)
    fpr = (len(pred - true) / denom) if denom > 0 else 0.0
    return RecoveryMetrics(tpr, fpr, len(true), len(pred))


@dataclass(frozen=True)
class CellResult:
    """One (learner, lambda, run) outcome; metrics are None when it failed.

    ``wall_ms`` is excluded from equality so identical reruns compare equal
    whether or not timing collection was on.
    """

    learner: str
    lam: float
    seed: int
    tpr: Optional[float]
    fpr: Optional[float]
    n_predicted: Optional[int]
    error: Optional[str] = None
    wall_ms: Optional[float] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class CurvePoint:
    """Mean ROC point for one (learner, lambda) over its successful runs."""

    learner: str
    lam: float
    mean_tpr: float
    mean_fpr: float
    n_ok: int


@dataclass(frozen=True)
class SweepResult:
    generator: GeneratorSpec
    learners: tuple[str, ...]
    lambda_grid: tuple[float, ...]
    n_runs: int
    base_seed: int
    estimator: EstimatorConfig
    cells: tuple[CellResult, ...]
    curves: tuple[CurvePoint, ...]
    auc: dict[str, float]

    @property
    def n_failed(self) -> int:
        return sum(1 for c in self.cells if not c.ok)

    def curve(self, learner: str) -> tuple[CurvePoint, ...]:
        return tuple(p for p in self.curves if p.learner == learner)


def _run_one_seed(args) -> list[CellResult]:
    gen, learners, grid, estimator, seed, timings = args
    try:
        data, truth = generate(gen.with_seed(seed))
    except Exception as exc:  # noqa: BLE001 - cell isolation is the contract
        msg = f"{type(exc).__name__}: {exc}"
        return [
            CellResult(lrn, lam, seed, None, None, None, error=msg)
            for lrn in learners
            for lam in grid
        ]
    est = CachedEstimator(data, estimator)
    out: list[CellResult] = []
    for lrn in learners:
        for lam in grid:
            t0 = time.perf_counter()
            try:
                es = learn(lrn, data, LearnerConfig(lam=lam, estimator=estimator), est)
                m = recovery(es, truth.edge_set)
            except Exception as exc:  # noqa: BLE001
                out.append(
                    CellResult(
                        lrn, lam, seed, None, None, None,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
                continue
            wall = (time.perf_counter() - t0) * 1e3 if timings else None
            out.append(
                CellResult(lrn, lam, seed, m.tpr, m.fpr, m.n_predicted, wall_ms=wall)
            )
    return out


def roc_sweep(
    gen: GeneratorSpec,
    learners: Sequence[str],
    lambda_grid: Sequence[float],
    n_runs: int,
    base_seed: Optional[int] = None,
    estimator: Optional[EstimatorConfig] = None,
    n_jobs: int = 1,
    max_failed_frac: float = 0.05,
    collect_timings: bool = False,
) -> SweepResult:
    """Run every (learner, lambda) cell over ``n_runs`` seeded datasets.

    Run r draws its dataset with seed ``base_seed + r`` (default base is the
    generator spec's own seed), and all learners and thresholds for a run
    share one estimator cache. With ``n_jobs > 1`` runs execute in worker
    processes; results are merged by key, so the outcome is identical to a
    serial sweep.
    """
    learners = tuple(learners)
    if not learners:
        raise ValueError("need at least one learner")
    for lrn in learners:
        if lrn not in LEARNERS:
            raise ValueError(f"unknown learner {lrn!r}")
    grid = tuple(float(l) for l in lambda_grid)
    if not grid:
        raise ValueError("lambda grid must be non-empty")
    if any(not np.isfinite(l) or l < 0 for l in grid):
        raise ValueError("lambda values must be finite and >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be strictly ascending")
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    if n_jobs < 1:
        raise ValueError("n_jobs must be >= 1")
    estimator = estimator if estimator is not None else EstimatorConfig()
    base = gen.seed if base_seed is None else int(base_seed)

    arg_list = [
        (gen, learners, grid, estimator, base + r, collect_timings)
        for r in range(n_runs)
    ]
    if n_jobs == 1:
        per_run = [_run_one_seed(a) for a in arg_list]
    else:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            per_run = list(pool.map(_run_one_seed, arg_list))

    cells = sorted(
        (c for run in per_run for c in run),
        key=lambda c: (c.learner, c.lam, c.seed),
    )
    n_failed = sum(1 for c in cells if not c.ok)
    if n_failed / len(cells) > max_failed_frac:
        examples = "; ".join(
            f"{c.learner} lam={c.lam} seed={c.seed}: {c.error}"
            for c in cells
            if not c.ok
        )
        raise SweepError(
            f"{n_failed}/{len(cells)} cells failed "
            f"(> {max_failed_frac:.0%} allowed): {examples[:2000]}"
        )

    curves: list[CurvePoint] = []
    for lrn in learners:
        for lam in grid:
            ok = [c for c in cells if c.learner == lrn and c.lam == lam and c.ok]
            if not ok:
                continue
            curves.append(
                CurvePoint(
                    lrn,
                    lam,
                    float(np.mean([c.tpr for c in ok])),
                    float(np.mean([c.fpr for c in ok])),
                    len(ok),
                )
            )
    curves.sort(key=lambda p: (p.learner, p.lam))

    auc: dict[str, float] = {}
    for lrn in learners:
        pts = sorted(
            ((p.mean_fpr, p.mean_tpr) for p in curves if p.learner == lrn)
        )
        xs = [0.0] + [p[0] for p in pts] + [1.0]
        ys = [0.0] + [p[1] for p in pts] + [1.0]
        auc[lrn] = float(_trapezoid(ys, xs))

    return SweepResult(
        generator=gen,
        learners=learners,
        lambda_grid=grid,
        n_runs=n_runs,
        base_seed=base,
        estimator=estimator,
        cells=tuple(cells),
        curves=tuple(curves),
        auc=auc,
    )


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cells_csv_text(result: SweepResult) -> str:
    """Per-cell table; failed cells keep their key columns and blank metrics
    (the error text itself is recorded in summary.json)."""
    rows = []
    for c in result.cells:
        rows.append(
            [
                c.learner,
                fmt_float(c.lam),
                str(c.seed),
                fmt_float(c.tpr) if c.tpr is not None else "",
                fmt_float(c.fpr) if c.fpr is not None else "",
                str(c.n_predicted) if c.n_predicted is not None else "",
                fmt_float(c.wall_ms) if c.wall_ms is not None else "",
            ]
        )
    return _csv_text(
        ["learner", "lambda", "seed", "tpr", "fpr", "n_predicted", "wall_ms"],
        rows,
    )


def curves_csv_text(result: SweepResult) -> str:
    rows = [
        [p.learner, fmt_float(p.lam), fmt_float(p.mean_tpr), fmt_float(p.mean_fpr)]
        for p in result.curves
    ]
    return _csv_text(["learner", "lambda", "mean_tpr", "mean_fpr"], rows)


def summary_json_text(result: SweepResult) -> str:
    obj = {
        "generator": {
            "kind": result.generator.kind,
            "n_samples": result.generator.n_samples,
            "params": dict(result.generator.params),
        },
        "base_seed": result.base_seed,
        "n_runs": result.n_runs,
        "learners": list(result.learners),
        "lambda_grid": list(result.lambda_grid),
        "estimator": {
            "method": result.estimator.method,
            "k": result.estimator.k,
            "rank_transform": result.estimator.rank_transform,
        },
        "auc": {k: result.auc[k] for k in sorted(result.auc)},
        "n_cells": len(result.cells),
        "n_failed": result.n_failed,
        "failures": [
            {"learner": c.learner, "lambda": c.lam, "seed": c.seed, "error": c.error}
            for c in result.cells
            if not c.ok
        ],
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_sweep(result: SweepResult, outdir: str | Path) -> None:
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_text_atomic(outdir / "cells.csv", cells_csv_text(result))
    write_text_atomic(outdir / "curves.csv", curves_csv_text(result))
    write_text_atomic(outdir / "summary.json", summary_json_text(result))


__all__ = [
    "RecoveryMetrics",
    "recovery",
    "CellResult",
    "CurvePoint",
    "SweepResult",
    "SweepError",
    "roc_sweep",
    "cells_csv_text",
    "curves_csv_text",
    "summary_json_text",
    "write_sweep",
]
