"""Command-line interface: generate datasets, learn graphs, run sweeps.

Every command takes ``--out DIR`` and writes deterministic files there,
plus a ``config.json`` echoing the fully resolved configuration. A JSON
file passed with ``--config`` supplies defaults; explicit flags win.

Exit status is 0 on success. A sweep exits nonzero if any cell failed,
even when the failure fraction was low enough to keep the outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Optional, Sequence

from . import io as mio
from .estimators import EstimatorConfig, METHODS
from .evaluation import SweepError, roc_sweep, write_sweep
from .learners import GS_MPLE, LEARNERS, LearnerConfig, gs_mple, learn
from .synthgen import GENERATORS, GeneratorSpec, generate


def _parse_param(text: str) -> tuple[str, Any]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(
            f"expected key=value, got {text!r}"
        )
    key, raw = text.split("=", 1)
    try:
        val = json.loads(raw)
    except json.JSONDecodeError:
        val = raw
    return key, val


def _load_config(path: Optional[str]) -> dict[str, Any]:
    if path is None:
        return {}
    obj = json.loads(Path(path).read_text())
    if not isinstance(obj, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return obj


def _pick(cli_value, cfg: dict[str, Any], key: str, default=None):
    if cli_value is not None:
        return cli_value
    return cfg.get(key, default)


def _require(value, flag: str):
    if value is None:
        raise ValueError(f"missing required option {flag}")
    return value


def _echo_config(outdir: Path, obj: dict[str, Any]) -> None:
    mio.write_text_atomic(
        outdir / "config.json", json.dumps(obj, indent=2, sort_keys=True) + "\n"
    )


def _estimator_from(args, cfg) -> EstimatorConfig:
    block = cfg.get("estimator")
    if isinstance(block, dict):
        # echoed config files carry the estimator as a nested block
        method = _pick(args.estimator, block, "method", "knn")
        k = _pick(args.k, block, "k", 3)
        rank = args.rank_transform or bool(block.get("rank_transform", False))
    else:
        method = _pick(args.estimator, cfg, "estimator", "knn")
        k = _pick(args.k, cfg, "k", 3)
        rank = args.rank_transform or bool(cfg.get("rank_transform", False))
    return EstimatorConfig(method=method, k=int(k), rank_transform=rank)


def _cmd_generate(args) -> int:
    cfg = _load_config(args.config)
    kind = _require(_pick(args.kind, cfg, "kind"), "--kind")
    n = int(_require(_pick(args.n, cfg, "n"), "--n"))
    seed = int(_pick(args.seed, cfg, "seed", 0))
    params = dict(cfg.get("params", {}))
    params.update(dict(args.param or []))
    if args.t_steps is not None:
        params["t_steps"] = args.t_steps
    spec = GeneratorSpec(kind, n, seed, params)
    data, truth = generate(spec)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    mio.write_dataset_csv(data, outdir / "data.csv")
    mio.write_edges(truth.edge_set, outdir / "truth.edges")
    _echo_config(
        outdir,
        {"command": "generate", "kind": kind, "n": n, "seed": seed, "params": params},
    )
    print(f"wrote {outdir / 'data.csv'} ({data.n_samples} rows, D={data.n_vars})")
    return 0


def _cmd_learn(args) -> int:
    cfg = _load_config(args.config)
    data_path = _require(_pick(args.data, cfg, "data"), "--data")
    algo = _pick(args.algo, cfg, "algo", GS_MPLE)
    if algo not in LEARNERS:
        raise ValueError(f"unknown learner {algo!r}; expected one of {sorted(LEARNERS)}")
    lam = float(_pick(args.lam, cfg, "lambda", 0.0))
    max_edges = _pick(args.max_edges, cfg, "max_edges")
    est_cfg = _estimator_from(args, cfg)
    lcfg = LearnerConfig(
        lam=lam,
        estimator=est_cfg,
        max_edges=None if max_edges is None else int(max_edges),
    )
    data = mio.read_dataset_csv(data_path)
    t0 = time.perf_counter()
    if algo == GS_MPLE:
        es, trace = gs_mple(data, lcfg)
    else:
        es = learn(algo, data, lcfg)
        trace = []
    wall_ms = (time.perf_counter() - t0) * 1e3
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    mio.write_edges(es, outdir / "learned.edges")
    mio.write_trace(trace, outdir / "trace.log")
    _echo_config(
        outdir,
        {
            "command": "learn",
            "data": str(data_path),
            "algo": algo,
            "lambda": lam,
            "max_edges": lcfg.max_edges,
            "estimator": {
                "method": est_cfg.method,
                "k": est_cfg.k,
                "rank_transform": est_cfg.rank_transform,
            },
        },
    )
    if args.timings:
        mio.write_text_atomic(
            outdir / "timing.json",
            json.dumps({"wall_ms": wall_ms}, indent=2) + "\n",
        )
    print(f"wrote {outdir / 'learned.edges'} ({es.n_edges} edges)")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    kind = _require(_pick(args.kind, cfg, "kind"), "--kind")
    n = int(_require(_pick(args.n, cfg, "n"), "--n"))
    base_seed = int(_pick(args.seed, cfg, "seed", 0))
    runs = int(_require(_pick(args.runs, cfg, "runs"), "--runs"))
    jobs = int(_pick(args.jobs, cfg, "jobs", 1))
    params = dict(cfg.get("params", {}))
    params.update(dict(args.param or []))
    if args.t_steps is not None:
        params["t_steps"] = args.t_steps
    if args.lambdas is not None:
        grid = [float(v) for v in args.lambdas.split(",") if v.strip() != ""]
    else:
        grid = [float(v) for v in cfg.get("lambdas", [])]
    if args.learners is not None:
        learners = [s for s in args.learners.split(",") if s.strip() != ""]
    else:
        learners = list(cfg.get("learners", sorted(LEARNERS)))
    est_cfg = _estimator_from(args, cfg)
    spec = GeneratorSpec(kind, n, base_seed, params)
    result = roc_sweep(
        spec,
        learners,
        grid,
        n_runs=runs,
        base_seed=base_seed,
        estimator=est_cfg,
        n_jobs=jobs,
        collect_timings=args.timings,
    )
    outdir = Path(args.out)
    write_sweep(result, outdir)
    _echo_config(
        outdir,
        {
            "command": "sweep",
            "kind": kind,
            "n": n,
            "seed": base_seed,
            "runs": runs,
            "jobs": jobs,
            "params": params,
            "lambdas": list(result.lambda_grid),
            "learners": list(result.learners),
            "estimator": {
                "method": est_cfg.method,
                "k": est_cfg.k,
                "rank_transform": est_cfg.rank_transform,
            },
        },
    )
    for lrn in result.learners:
        print(f"auc[{lrn}] = {result.auc[lrn]:.4f}")
    if result.n_failed:
        print(
            f"mrfstruct: {result.n_failed}/{len(result.cells)} cells failed; "
            "see summary.json",
            file=sys.stderr,
        )
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mrfstruct",
        description="Learn Markov-network edge sets from samples and score recovery.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a synthetic dataset with known truth")
    gen.add_argument("--kind", choices=sorted(GENERATORS))
    gen.add_argument("--n", type=int, help="number of samples")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--t-steps", dest="t_steps", type=int, help="HMM time steps")
    gen.add_argument(
        "--param",
        action="append",
        type=_parse_param,
        metavar="KEY=VALUE",
        help="generator keyword override; repeatable (values parsed as JSON)",
    )

    lrn = sub.add_parser("learn", help="learn an edge set from a dataset CSV")
    lrn.add_argument("--data", help="dataset CSV path")
    lrn.add_argument("--algo", choices=sorted(LEARNERS))
    lrn.add_argument("--lambda", dest="lam", type=float, help="stop threshold")
    lrn.add_argument("--max-edges", dest="max_edges", type=int)

    swp = sub.add_parser("sweep", help="threshold sweep over seeded replicate runs")
    swp.add_argument("--kind", choices=sorted(GENERATORS))
    swp.add_argument("--n", type=int, help="samples per run")
    swp.add_argument("--seed", type=int, help="base seed; run r uses seed+r")
    swp.add_argument("--t-steps", dest="t_steps", type=int, help="HMM time steps")
    swp.add_argument("--runs", type=int, help="number of replicate runs")
    swp.add_argument("--lambdas", help="comma-separated threshold grid")
    swp.add_argument("--learners", help="comma-separated learner names")
    swp.add_argument("--jobs", type=int, help="worker processes (default 1)")
    swp.add_argument(
        "--param",
        action="append",
        type=_parse_param,
        metavar="KEY=VALUE",
        help="generator keyword override; repeatable",
    )

    for cmd in (lrn, swp):
        cmd.add_argument("--estimator", choices=sorted(METHODS))
        cmd.add_argument("--k", type=int, help="neighbor count for the knn estimator")
        cmd.add_argument(
            "--rank-transform",
            action="store_true",
            help="rank-scale continuous columns before knn estimation",
        )
    for cmd in (gen, lrn, swp):
        cmd.add_argument("--out", required=True, help="output directory")
        cmd.add_argument("--config", help="JSON file of defaults for these options")
    for cmd in (lrn, swp):
        cmd.add_argument(
            "--timings",
            action="store_true",
            help="record wall time (breaks byte-identical reruns)",
        )
    return p


_COMMANDS = {
    "generate": _cmd_generate,
    "learn": _cmd_learn,
    "sweep": _cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError, SweepError, RuntimeError) as exc:
        print(f"mrfstruct: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
