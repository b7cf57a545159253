"""Experiment cells: repeated runs, aggregation, and the CSV contracts.

A cell is one parameter setting run for a number of repetitions. Each
repetition gets its own integer seed derived from the cell's root seed
(see core.spawn_rep_seeds), so rows in runs.csv can be reproduced alone.
Occupation aggregation is two-level: within a repetition, snapshots in the
retained window are averaged first; the cell then averages those per-rep
means with equal weight, skipping repetitions that never entered the
window.

CSV columns are a compatibility contract, consumed by external tooling:

    runs.csv     cell_id,seed,n,k,N,variant,selection,covered,iterations,evaluations
    dynamics.csv cell_id,rep,ones_count,mean_occupation,retained_snapshots
    sweep.csv    cell_id,n,k,N,variant,selection,reps,mean_evals,std_evals,lb_evals,ratio

k is written as 0 for benchmarks without a jump parameter; floats use
%.10g so identical inputs reproduce byte-identical files.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .benchmarks import ONEJUMPZEROJUMP, ONEMINMAX, BenchmarkSpec, ojzj, oneminmax
from .core import spawn_rep_seeds
from .dynamics import SurvivalFrequencies
from .engine import FAIR, RANDOM_TIES, RunConfig, RunResult, run
from .oracle import TheoryBounds, theory_bounds

WORKERS_ENV = "NSGA2LAB_WORKERS"

KIND_SHORT = {ONEJUMPZEROJUMP: "ojzj", ONEMINMAX: "omm"}


def default_max_iterations(spec: BenchmarkSpec) -> int:
    """Generous budget: about 100x the expected coverage scale."""
    if spec.kind == ONEJUMPZEROJUMP:
        return 100 * spec.n ** spec.k
    return round(100 * spec.n * math.log(spec.n))


@dataclass(frozen=True)
class CellConfig:
    spec: BenchmarkSpec
    pop_size: int
    reps: int
    root_seed: int
    max_iterations: int
    sorting: str = RANDOM_TIES
    selection: str = FAIR
    record_dynamics: bool = True
    snapshot_stride: int | None = None
    probe_survival: bool = False
    probe_yz: bool = False


def make_cell(
    kind: str,
    n: int,
    k: int | None = None,
    pop_factor: float | None = None,
    pop_size: int | None = None,
    sorting: str = RANDOM_TIES,
    selection: str = FAIR,
    reps: int = 1,
    seed: int = 1,
    max_iterations: int | None = None,
    record_dynamics: bool = True,
    snapshot_stride: int | None = None,
    probe_survival: bool = False,
    probe_yz: bool = False,
) -> CellConfig:
    """Resolve a cell: benchmark spec, population size, iteration budget."""
    if kind == ONEJUMPZEROJUMP:
        if k is None:
            raise ValueError("onejumpzerojump requires k")
        spec = ojzj(n, k)
    elif kind == ONEMINMAX:
        if k not in (None, 0):
            raise ValueError("oneminmax takes no k")
        spec = oneminmax(n)
    else:
        raise ValueError(f"unknown benchmark kind: {kind!r}")
    if (pop_factor is None) == (pop_size is None):
        raise ValueError("give exactly one of pop_factor and pop_size")
    if pop_size is None:
        pop_size = round(pop_factor * spec.front_size)
    if pop_size < 2:
        raise ValueError("population size must be >= 2")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    return CellConfig(
        spec=spec,
        pop_size=pop_size,
        reps=reps,
        root_seed=seed,
        max_iterations=max_iterations if max_iterations is not None else default_max_iterations(spec),
        sorting=sorting,
        selection=selection,
        record_dynamics=record_dynamics,
        snapshot_stride=snapshot_stride,
        probe_survival=probe_survival,
        probe_yz=probe_yz,
    )


def cell_id(cell: CellConfig) -> str:
    spec = cell.spec
    return (
        f"{KIND_SHORT[spec.kind]}_n{spec.n}_k{spec.k or 0}"
        f"_N{cell.pop_size}_{cell.sorting}_{cell.selection}"
    )


@dataclass(frozen=True)
class AggregateResult:
    """One cell's repetitions plus the derived statistics and theory block."""

    cell: CellConfig
    cell_id: str
    seeds: list[int]
    results: list[RunResult]
    covered_count: int
    mean_evals: float
    std_evals: float
    min_evals: int
    median_evals: float
    max_evals: int
    theory: TheoryBounds
    occupation: np.ndarray | None
    occupation_reps: int
    survival: SurvivalFrequencies | None

    @property
    def all_covered(self) -> bool:
        return self.covered_count == self.cell.reps

    def to_text(self) -> str:
        c = self.cell
        lines = [
            f"cell {self.cell_id}: {c.reps} reps, {self.covered_count}/{c.reps} covered full front",
            (
                f"  evaluations over covered runs: mean {self.mean_evals:.6g}  std {self.std_evals:.4g}"
                f"  min {self.min_evals}  median {self.median_evals:.6g}  max {self.max_evals}"
            ),
        ]
        uncovered = [(s, r) for s, r in zip(self.seeds, self.results) if not r.covered]
        for seed, res in uncovered:
            lines.append(f"  uncovered: seed {seed} stopped after {res.iterations} iterations ({res.evaluations} evaluations)")
        if self.theory.lb_evals is not None and self.covered_count > 0:
            ratio = self.mean_evals / self.theory.lb_evals
            lines.append(f"  theory lower bound {self.theory.lb_evals:.6g} evaluations -> ratio {ratio:.3f}")
            if self.cell.spec.kind == ONEJUMPZEROJUMP and ratio < 1.0:
                lines.append(
                    "  WARNING: mean below the asymptotic lower bound"
                    " (finite-n deviation; investigate before trusting this cell)"
                )
        if self.occupation is not None and self.occupation_reps > 0:
            spec = c.spec
            lo, hi = (spec.k, spec.n - spec.k) if spec.kind == ONEJUMPZEROJUMP else (0, spec.n)
            lines.append(
                f"  occupation window in {self.occupation_reps}/{c.reps} reps;"
                f" boundary level means: {lo}: {self.occupation[lo]:.3f}, {hi}: {self.occupation[hi]:.3f}"
            )
        freq = self.survival.frequency if self.survival is not None else None
        if freq is not None:
            lines.append(
                f"  zero-crowding first-rank survival frequency: {freq:.4f}"
                f" ({self.survival.survived}/{self.survival.observed})"
            )
        return "\n".join(lines)


def _run_rep(config: RunConfig) -> RunResult:
    return run(config)


def worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_cell(cell: CellConfig, workers: int | None = None) -> AggregateResult:
    """Run every repetition of a cell and aggregate."""
    seeds = spawn_rep_seeds(cell.root_seed, cell.reps)
    configs = [
        RunConfig(
            spec=cell.spec,
            pop_size=cell.pop_size,
            seed=s,
            max_iterations=cell.max_iterations,
            sorting=cell.sorting,
            selection=cell.selection,
            record_dynamics=cell.record_dynamics,
            snapshot_stride=cell.snapshot_stride,
            probe_survival=cell.probe_survival,
            probe_yz=cell.probe_yz,
        )
        for s in seeds
    ]
    if workers is None:
        workers = worker_count()
    if workers > 1 and cell.reps > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_rep, configs))
    else:
        results = [run(c) for c in configs]
    return aggregate(cell, seeds, results)


def aggregate(cell: CellConfig, seeds: list[int], results: list[RunResult]) -> AggregateResult:
    # Statistics describe successful runs; truncated ones are reported separately.
    covered_evals = [r.evaluations for r in results if r.covered]
    evals = np.array(covered_evals if covered_evals else [0], dtype=np.float64)
    occupation = None
    occupation_reps = 0
    if cell.record_dynamics:
        valid = [r.dynamics.level_means for r in results if r.dynamics is not None and r.dynamics.valid]
        occupation_reps = len(valid)
        if valid:
            occupation = np.mean(np.stack(valid), axis=0)
    survival = None
    if cell.probe_survival:
        survival = SurvivalFrequencies()
        for r in results:
            if r.survival is not None:
                survival.merge(r.survival)
    return AggregateResult(
        cell=cell,
        cell_id=cell_id(cell),
        seeds=seeds,
        results=results,
        covered_count=len(covered_evals),
        mean_evals=float(evals.mean()) if covered_evals else float("nan"),
        std_evals=float(evals.std(ddof=1)) if len(covered_evals) > 1 else 0.0,
        min_evals=int(evals.min()),
        median_evals=float(np.median(evals)),
        max_evals=int(evals.max()),
        theory=theory_bounds(cell.spec, cell.pop_size),
        occupation=occupation,
        occupation_reps=occupation_reps,
        survival=survival,
    )


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _cell_row_prefix(agg: AggregateResult) -> list:
    spec = agg.cell.spec
    return [agg.cell_id, spec.n, spec.k or 0, agg.cell.pop_size, agg.cell.sorting, agg.cell.selection]


def write_runs_csv(path: str, aggs: list[AggregateResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["cell_id", "seed", "n", "k", "N", "variant", "selection", "covered", "iterations", "evaluations"])
        for agg in sorted(aggs, key=lambda a: a.cell_id):
            spec = agg.cell.spec
            for seed, res in zip(agg.seeds, agg.results):
                out.writerow([
                    agg.cell_id, seed, spec.n, spec.k or 0, agg.cell.pop_size,
                    agg.cell.sorting, agg.cell.selection,
                    "true" if res.covered else "false",
                    res.iterations, res.evaluations,
                ])


def occupation_levels(spec: BenchmarkSpec) -> range:
    """The ones-count rows emitted for a benchmark's occupation data."""
    if spec.kind == ONEJUMPZEROJUMP:
        return range(spec.k, spec.n - spec.k + 1)
    return range(0, spec.n + 1)


def write_dynamics_csv(path: str, aggs: list[AggregateResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["cell_id", "rep", "ones_count", "mean_occupation", "retained_snapshots"])
        for agg in sorted(aggs, key=lambda a: a.cell_id):
            for rep, res in enumerate(agg.results):
                summary = res.dynamics
                if summary is None or not summary.valid:
                    continue
                for level in occupation_levels(agg.cell.spec):
                    out.writerow([
                        agg.cell_id, rep, level,
                        _fmt(float(summary.level_means[level])),
                        summary.retained_snapshots,
                    ])


def write_sweep_csv(path: str, aggs: list[AggregateResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh)
        out.writerow(["cell_id", "n", "k", "N", "variant", "selection", "reps", "mean_evals", "std_evals", "lb_evals", "ratio"])
        for agg in sorted(aggs, key=lambda a: a.cell_id):
            lb = agg.theory.lb_evals
            out.writerow(
                _cell_row_prefix(agg)
                + [agg.cell.reps, _fmt(agg.mean_evals), _fmt(agg.std_evals), _fmt(lb), _fmt(agg.mean_evals / lb)]
            )
