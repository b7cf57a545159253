"""Command-line front end.

Subcommands: run (one cell, writes runs.csv and dynamics.csv), sweep
(cartesian product of comma-separated parameter lists, adds sweep.csv),
verify (machine-checks the exact-kernel inequalities and the sort/crowding
structure; exits 2 on any violation), bounds (prints the closed-form theory
quantities for a setting).

Flag values override config-file values, which override built-in defaults.
The config file is JSON with keys matching the long flag names (underscores
for dashes). NSGA2LAB_WORKERS sets the repetition worker-process count.
Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from itertools import product

from .benchmarks import ONEJUMPZEROJUMP, ONEMINMAX
from .engine import FAIR, RANDOM_TIES, SELECTION_MODES, SORTING_POLICIES
from .experiments import (
    make_cell,
    run_cell,
    write_dynamics_csv,
    write_runs_csv,
    write_sweep_csv,
)
from .oracle import (
    theory_bounds,
    verify_arrival_bound,
    verify_crowding_structure,
    verify_jump_bound,
    verify_rank_equivalence,
)

BENCHMARK_NAMES = {
    "ojzj": ONEJUMPZEROJUMP,
    "onejumpzerojump": ONEJUMPZEROJUMP,
    "omm": ONEMINMAX,
    "oneminmax": ONEMINMAX,
}


class Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on bad usage; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class Usage(Exception):
    pass


def _add_cell_flags(p: argparse.ArgumentParser, lists: bool = False) -> None:
    many = " (comma-separated list allowed)" if lists else ""
    p.add_argument("--benchmark", help="ojzj (default) or omm")
    p.add_argument("--n", help="genome length" + many)
    p.add_argument("--k", help="jump width, ojzj only" + many)
    p.add_argument("--pop-factor",
                   help="population size as multiple of the front size (default 4)" + many)
    p.add_argument("--pop-size", help="explicit population size, alternative to --pop-factor" + many)
    p.add_argument("--variant", help="crowding tie sorting: random (default) or fixed" + many)
    p.add_argument("--selection", help="parent selection: fair (default), uniform, tournament" + many)
    p.add_argument("--reps", help="repetitions per cell (default 1)")
    p.add_argument("--seed", help="root seed (default 1)")
    p.add_argument("--max-iters", help="iteration budget (default 100x coverage scale)")
    p.add_argument("--out", help="output directory (default .)")
    p.add_argument("--dynamics", action=argparse.BooleanOptionalAction,
                   help="record occupation snapshots (default on)")
    p.add_argument("--survival-probe", action=argparse.BooleanOptionalAction,
                   help="tally zero-crowding survival frequencies (default off)")
    p.add_argument("--probe-yz", action=argparse.BooleanOptionalAction,
                   help="exploratory copy/arrival counters (default off)")
    p.add_argument("--snapshot-stride", help="override the snapshot cadence")
    p.add_argument("--config", help="JSON config file; flags override its values")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise Usage(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise Usage(f"config {path} must hold a JSON object")
    return cfg


def _resolve(args: argparse.Namespace, cfg: dict, key: str, default, cast=None):
    value = getattr(args, key, None)
    if value is None:
        value = cfg.get(key, default)
    if value is None or cast is None:
        return value
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise Usage(f"bad value for {key}: {value!r}") from exc


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        if value.lower() in ("true", "1", "yes", "on"):
            return True
        if value.lower() in ("false", "0", "no", "off"):
            return False
    raise ValueError(value)


def _benchmark_kind(name) -> str:
    kind = BENCHMARK_NAMES.get(str(name).lower())
    if kind is None:
        raise Usage(f"unknown benchmark {name!r} (use ojzj or omm)")
    return kind


def _shared_kwargs(args: argparse.Namespace, cfg: dict) -> dict:
    """Per-cell settings that are scalar in both run and sweep."""
    return dict(
        reps=_resolve(args, cfg, "reps", 1, int),
        seed=_resolve(args, cfg, "seed", 1, int),
        max_iterations=_resolve(args, cfg, "max_iters", None, int),
        record_dynamics=_resolve(args, cfg, "dynamics", True, _bool),
        snapshot_stride=_resolve(args, cfg, "snapshot_stride", None, int),
        probe_survival=_resolve(args, cfg, "survival_probe", False, _bool),
        probe_yz=_resolve(args, cfg, "probe_yz", False, _bool),
    )


def _check_modes(sorting: str, selection: str) -> None:
    if sorting not in SORTING_POLICIES:
        raise Usage(f"unknown variant {sorting!r} (use random or fixed)")
    if selection not in SELECTION_MODES:
        raise Usage(f"unknown selection {selection!r} (use fair, uniform or tournament)")


def _build_cell(kind, n, k, pop_factor, pop_size, sorting, selection, shared):
    _check_modes(sorting, selection)
    if pop_factor is None and pop_size is None:
        pop_factor = 4.0
    try:
        return make_cell(
            kind=kind, n=n, k=k, pop_factor=pop_factor, pop_size=pop_size,
            sorting=sorting, selection=selection, **shared,
        )
    except ValueError as exc:
        raise Usage(str(exc)) from exc


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    n = _resolve(args, cfg, "n", None, int)
    if n is None:
        raise Usage("--n is required")
    cell = _build_cell(
        kind=_benchmark_kind(_resolve(args, cfg, "benchmark", "ojzj")),
        n=n,
        k=_resolve(args, cfg, "k", None, int),
        pop_factor=_resolve(args, cfg, "pop_factor", None, float),
        pop_size=_resolve(args, cfg, "pop_size", None, int),
        sorting=_resolve(args, cfg, "variant", RANDOM_TIES),
        selection=_resolve(args, cfg, "selection", FAIR),
        shared=_shared_kwargs(args, cfg),
    )
    out_dir = _resolve(args, cfg, "out", ".")
    agg = run_cell(cell)
    os.makedirs(out_dir, exist_ok=True)
    runs_path = os.path.join(out_dir, "runs.csv")
    write_runs_csv(runs_path, [agg])
    paths = [runs_path]
    if cell.record_dynamics:
        dynamics_path = os.path.join(out_dir, "dynamics.csv")
        write_dynamics_csv(dynamics_path, [agg])
        paths.append(dynamics_path)
    print(agg.to_text())
    print(agg.theory.to_text())
    print("wrote " + ", ".join(paths))
    return 0


def _int_list(raw, what: str) -> list[int]:
    try:
        return [int(v) for v in _split_list(raw)]
    except ValueError as exc:
        raise Usage(f"bad value for {what}: {raw!r}") from exc


def _float_list(raw, what: str) -> list[float]:
    try:
        return [float(v) for v in _split_list(raw)]
    except ValueError as exc:
        raise Usage(f"bad value for {what}: {raw!r}") from exc


def _split_list(value) -> list[str]:
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [part.strip() for part in str(value).split(",") if part.strip()]


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    kind = _benchmark_kind(_resolve(args, cfg, "benchmark", "ojzj"))
    n_raw = _resolve(args, cfg, "n", None)
    if n_raw is None:
        raise Usage("--n is required")
    n_list = _int_list(n_raw, "n")
    k_raw = _resolve(args, cfg, "k", None)
    k_list = _int_list(k_raw, "k") if k_raw is not None else [None]
    pf_raw = _resolve(args, cfg, "pop_factor", None)
    ps_raw = _resolve(args, cfg, "pop_size", None)
    pf_list = _float_list(pf_raw, "pop_factor") if pf_raw is not None else [None]
    ps_list = _int_list(ps_raw, "pop_size") if ps_raw is not None else [None]
    variant_list = _split_list(_resolve(args, cfg, "variant", RANDOM_TIES))
    selection_list = _split_list(_resolve(args, cfg, "selection", FAIR))
    shared = _shared_kwargs(args, cfg)
    out_dir = _resolve(args, cfg, "out", ".")

    aggs = []
    for n, k, pf, ps, variant, selection in product(
        n_list, k_list, pf_list, ps_list, variant_list, selection_list
    ):
        cell = _build_cell(kind, n, k, pf, ps, variant, selection, shared)
        agg = run_cell(cell)
        print(agg.to_text())
        aggs.append(agg)

    os.makedirs(out_dir, exist_ok=True)
    runs_path = os.path.join(out_dir, "runs.csv")
    sweep_path = os.path.join(out_dir, "sweep.csv")
    write_runs_csv(runs_path, aggs)
    write_sweep_csv(sweep_path, aggs)
    paths = [runs_path, sweep_path]
    if any(a.cell.record_dynamics for a in aggs):
        dynamics_path = os.path.join(out_dir, "dynamics.csv")
        write_dynamics_csv(dynamics_path, aggs)
        paths.append(dynamics_path)
    print("wrote " + ", ".join(paths))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        n_max = int(args.n_max)
        tolerance = float(args.tolerance)
        trials = int(args.trials)
    except (TypeError, ValueError) as exc:
        raise Usage(str(exc)) from exc
    reports = [
        verify_jump_bound(n_max=n_max, tolerance=tolerance),
        verify_arrival_bound(n_max=n_max, tolerance=tolerance),
        verify_rank_equivalence(trials=trials),
        verify_crowding_structure(trials=trials),
    ]
    for report in reports:
        print(report.to_text())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, "verify.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2)
        print(f"wrote {path}")
    return 0 if all(r.passed for r in reports) else 2


def cmd_bounds(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    n = _resolve(args, cfg, "n", None, int)
    if n is None:
        raise Usage("--n is required")
    cell = _build_cell(
        kind=_benchmark_kind(_resolve(args, cfg, "benchmark", "ojzj")),
        n=n,
        k=_resolve(args, cfg, "k", None, int),
        pop_factor=_resolve(args, cfg, "pop_factor", None, float),
        pop_size=_resolve(args, cfg, "pop_size", None, int),
        sorting=_resolve(args, cfg, "variant", RANDOM_TIES),
        selection=_resolve(args, cfg, "selection", FAIR),
        shared=dict(reps=1, seed=1),
    )
    mu = _resolve(args, cfg, "mu", 0.0, float)
    print(theory_bounds(cell.spec, cell.pop_size, mu=mu).to_text())
    return 0


def build_parser() -> Parser:
    parser = Parser(
        prog="nsga2lab",
        description="Deterministic NSGA-II experiments on two-objective bit-string benchmarks",
        epilog="environment: NSGA2LAB_WORKERS = worker processes for repetitions (default 1)",
    )
    sub = parser.add_subparsers(dest="command", parser_class=Parser)

    p_run = sub.add_parser("run", help="run one parameter cell and write CSV outputs")
    _add_cell_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a grid of cells and add sweep.csv")
    _add_cell_flags(p_sweep, lists=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="machine-check kernel inequalities and sort structure")
    p_verify.add_argument("--n-max", default=20, help="largest genome length for the exact checks")
    p_verify.add_argument("--tolerance", default=1e-12, help="additive float tolerance")
    p_verify.add_argument("--trials", default=1000, help="random structures per equivalence check")
    p_verify.add_argument("--out", help="directory for verify.json")
    p_verify.set_defaults(func=cmd_verify)

    p_bounds = sub.add_parser("bounds", help="print closed-form theory quantities")
    _add_cell_flags(p_bounds)
    p_bounds.add_argument("--mu", help="missing-fraction parameter for the oneminmax bound")
    p_bounds.set_defaults(func=cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except Usage as exc:
        print(f"nsga2lab: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
