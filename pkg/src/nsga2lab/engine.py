"""NSGA-II for two objectives: ranking, crowding, survival, one full run.

The production non-dominated sort exploits the two-objective shape. Members
are grouped by objective vector and groups are processed in (f1 desc, f2
desc) order; every potential dominator of a group is then processed before
it, and a group's rank is one plus the highest rank among processed groups
whose f2 is >= its own. Tracking max-f2 per rank (non-increasing across
ranks) turns that lookup into a binary search, so the sweep costs
O(M log M) total against the O(M^2) of the definitional algorithm it is
tested against.

Crowding distance follows the standard recipe per rank: for each objective,
sort the front, give the two border members infinite distance, and add the
normalized gap between each interior member's neighbors. Equal objective
values make the sort order ambiguous, and that ambiguity is exactly the
tie-sorting policy:

  RANDOM_TIES   fresh uniform permutation per objective (ties independent)
  FIXED_SHARED  one uniform permutation per front, shared by both objectives

Under FIXED_SHARED both sortings place copies of a duplicated vector in the
same relative order, so per duplicated front value exactly the outermost two
copies get positive distance; under RANDOM_TIES up to four can.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .benchmarks import BenchmarkSpec, CoverageStatus, coverage_status, evaluate_population, pareto_structure
from .core import Population, concat, make_rng, random_population
from .dynamics import (
    DynamicsRecorder,
    DynamicsSummary,
    PhaseState,
    SurvivalFrequencies,
    YZCounters,
    default_snapshot_stride,
    survival_frequency_probe,
)

RANDOM_TIES = "random"
FIXED_SHARED = "fixed"
SORTING_POLICIES = (RANDOM_TIES, FIXED_SHARED)

FAIR = "fair"
UNIFORM = "uniform"
TOURNAMENT = "tournament"
SELECTION_MODES = (FAIR, UNIFORM, TOURNAMENT)


def rank_partition(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    """Non-dominated ranks (0-based) for a two-objective maximization set.

    Returns an array r with r[i] = 0 for the non-dominated members, and
    generally r[i] = 1 + max rank among members dominating i.
    """
    f1 = np.asarray(f1)
    f2 = np.asarray(f2)
    m = f1.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort((f2, f1))
    sf1 = f1[order]
    sf2 = f2[order]
    new_group = np.empty(m, dtype=bool)
    new_group[0] = True
    new_group[1:] = (sf1[1:] != sf1[:-1]) | (sf2[1:] != sf2[:-1])
    gid_sorted = np.cumsum(new_group) - 1
    group_f2 = sf2[new_group]
    n_groups = int(gid_sorted[-1]) + 1

    group_rank = np.empty(n_groups, dtype=np.int64)
    neg_max_f2: list = []  # -max(f2) per rank, non-decreasing
    for g in range(n_groups - 1, -1, -1):  # (f1 desc, f2 desc)
        b = group_f2[g]
        r = bisect_right(neg_max_f2, -b)  # first rank with max f2 < b
        group_rank[g] = r
        if r == len(neg_max_f2):
            neg_max_f2.append(-b)
        elif -b < neg_max_f2[r]:
            neg_max_f2[r] = -b

    member_gid = np.empty(m, dtype=np.int64)
    member_gid[order] = gid_sorted
    return group_rank[member_gid]


def crowding_distances(
    f1: np.ndarray,
    f2: np.ndarray,
    policy: str,
    rng: np.random.Generator,
) -> np.ndarray:
    """Crowding distances for the members of one front (see module docstring)."""
    if policy not in SORTING_POLICIES:
        raise ValueError(f"unknown sorting policy: {policy!r}")
    f1 = np.asarray(f1)
    f2 = np.asarray(f2)
    m = f1.shape[0]
    d = np.zeros(m)
    if m == 0:
        return d
    if policy == FIXED_SHARED:
        shared = rng.permutation(m)
        ties = (shared, shared)
    else:
        ties = (rng.permutation(m), rng.permutation(m))
    for vals, tie in ((f1, ties[0]), (f2, ties[1])):
        order = np.lexsort((tie, vals))
        d[order[0]] += np.inf
        d[order[-1]] += np.inf
        spread = vals[order[-1]] - vals[order[0]]
        if m > 2 and spread > 0:
            d[order[1:-1]] += (vals[order[2:]] - vals[order[:-2]]) / spread
    return d


@dataclass
class RankedPopulation:
    """Rank and crowding data for one combined population."""

    rank_of: np.ndarray
    fronts: list[np.ndarray]
    crowding: np.ndarray


def rank_and_crowd(pop: Population, policy: str, rng: np.random.Generator) -> RankedPopulation:
    """Sort into fronts and compute crowding per front, rank 0 first."""
    if not pop.evaluated:
        raise ValueError("population must be evaluated first")
    ranks = rank_partition(pop.f1, pop.f2)
    crowding = np.zeros(pop.size)
    fronts = []
    for r in range(int(ranks.max()) + 1 if pop.size else 0):
        front = np.flatnonzero(ranks == r)
        fronts.append(front)
        crowding[front] = crowding_distances(pop.f1[front], pop.f2[front], policy, rng)
    return RankedPopulation(rank_of=ranks, fronts=fronts, crowding=crowding)


def survivor_indices(
    ranked: RankedPopulation,
    count: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, int | None]:
    """Pick `count` survivors rank by rank; crowding then uniform random ties.

    Returns (indices, critical_rank); critical_rank is None when the kept
    fronts fit exactly and no crowding-based cut was needed.
    """
    chosen: list[np.ndarray] = []
    need = count
    for r, front in enumerate(ranked.fronts):
        if front.size <= need:
            chosen.append(front)
            need -= front.size
            if need == 0:
                return np.concatenate(chosen), None
        else:
            cd = ranked.crowding[front]
            tiebreak = rng.random(front.size)
            keep = front[np.lexsort((tiebreak, -cd))[:need]]
            chosen.append(keep)
            return np.concatenate(chosen), r
    return np.concatenate(chosen), None  # fewer members than count


def select_survivors(
    pop: Population,
    count: int,
    policy: str,
    rng: np.random.Generator,
) -> tuple[Population, RankedPopulation]:
    """Survival step on a combined population; returns survivors and ranking."""
    ranked = rank_and_crowd(pop, policy, rng)
    idx, _ = survivor_indices(ranked, count, rng)
    return pop.take(idx), ranked


def select_parents(
    pop: Population,
    mode: str,
    rng: np.random.Generator,
    policy: str = RANDOM_TIES,
) -> np.ndarray:
    """Indices of the parents for one generation (one child per slot).

    fair: every member once. uniform: N picks with replacement. tournament:
    N binary tournaments decided by rank, then crowding, then a fair coin;
    the crowding comparison needs a tie policy, hence the policy argument.
    """
    m = pop.size
    if mode == FAIR:
        return np.arange(m)
    if mode == UNIFORM:
        return rng.integers(0, m, size=m)
    if mode == TOURNAMENT:
        ranked = rank_and_crowd(pop, policy, rng)
        a = rng.integers(0, m, size=m)
        b = rng.integers(0, m, size=m)
        ra, rb = ranked.rank_of[a], ranked.rank_of[b]
        ca, cb = ranked.crowding[a], ranked.crowding[b]
        coin = rng.random(m) < 0.5
        pick_a = (ra < rb) | ((ra == rb) & (ca > cb)) | ((ra == rb) & (ca == cb) & coin)
        return np.where(pick_a, a, b)
    raise ValueError(f"unknown selection mode: {mode!r}")


def mutate_bitwise(genome: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability 1/n."""
    g = np.asarray(genome, dtype=np.uint8)
    n = g.shape[-1]
    flips = rng.random(n) < 1.0 / n
    return g ^ flips.astype(np.uint8)


def mutate_genomes(
    genomes: np.ndarray,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched bit-wise mutation; also reports which rows actually changed."""
    n = genomes.shape[1]
    flips = rng.random(genomes.shape) < 1.0 / n
    children = genomes ^ flips.astype(np.uint8)
    return children, flips.any(axis=1)


@dataclass
class CheckCounter:
    checked: int = 0
    violations: int = 0


@dataclass
class TraceAssertions:
    """Runtime invariant ledger for one run.

    pareto_membership: with the whole initial population strictly inside the
    inner Pareto set, no member may ever leave the Pareto set (there are
    always enough rank-0 Pareto members to fill the next population).
    front_retention: once the population is large enough (4x front size
    under RANDOM_TIES, 2x under FIXED_SHARED), every front value reached is
    held forever, because each distinct rank-0 value keeps at least one
    positively-crowded copy and all positively-crowded rank-0 members fit.
    Each check is only armed when its precondition holds.
    """

    pareto_membership_armed: bool = False
    front_retention_armed: bool = False
    pareto_membership: CheckCounter = field(default_factory=CheckCounter)
    front_retention: CheckCounter = field(default_factory=CheckCounter)

    @property
    def ok(self) -> bool:
        return self.pareto_membership.violations == 0 and self.front_retention.violations == 0


@dataclass(frozen=True)
class RunConfig:
    """One repetition: benchmark, population, policies, budget, seed."""

    spec: BenchmarkSpec
    pop_size: int
    seed: int
    max_iterations: int
    sorting: str = RANDOM_TIES
    selection: str = FAIR
    record_dynamics: bool = False
    snapshot_stride: int | None = None
    probe_survival: bool = False
    probe_yz: bool = False

    def __post_init__(self) -> None:
        if self.pop_size < 1:
            raise ValueError("pop_size must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.sorting not in SORTING_POLICIES:
            raise ValueError(f"unknown sorting policy: {self.sorting!r}")
        if self.selection not in SELECTION_MODES:
            raise ValueError(f"unknown selection mode: {self.selection!r}")


@dataclass(frozen=True)
class RunResult:
    config: RunConfig
    covered: bool
    iterations: int
    evaluations: int
    coverage: CoverageStatus
    phase: PhaseState
    trace: TraceAssertions
    dynamics: DynamicsSummary | None = None
    survival: SurvivalFrequencies | None = None
    yz: YZCounters | None = None


def run(config: RunConfig) -> RunResult:
    """One NSGA-II run until full front coverage or the iteration budget.

    evaluations = pop_size * (iterations + 1): the initial population counts
    as one evaluated batch, every generation adds one more.
    """
    spec = config.spec
    n = spec.n
    pop_size = config.pop_size
    rng = make_rng(config.seed)
    structure = pareto_structure(spec)
    track_tight = config.sorting == FIXED_SHARED

    pop = evaluate_population(spec, random_population(n, pop_size, rng))
    counts = np.bincount(pop.ones, minlength=n + 1)

    phase = PhaseState()
    phase.observe(0, counts, structure, track_tightening=track_tight)

    trace = TraceAssertions()
    trace.pareto_membership_armed = bool(structure.ones_in_inner[pop.ones].all())
    retention_factor = 2 if config.sorting == FIXED_SHARED else 4
    trace.front_retention_armed = pop_size >= retention_factor * structure.size
    front_mask = structure.ones_in_front
    seen_front_levels = front_mask & (counts > 0)

    recorder = None
    if config.record_dynamics:
        stride = config.snapshot_stride or default_snapshot_stride(spec)
        recorder = DynamicsRecorder(n=n, stride=stride)
        recorder.maybe_snapshot(0, counts)
    probe = SurvivalFrequencies() if config.probe_survival else None
    yz = YZCounters(n) if config.probe_yz else None

    iterations = 0
    covered = phase.full_front_covered_at is not None
    while not covered and iterations < config.max_iterations:
        t = iterations + 1
        parent_idx = select_parents(pop, config.selection, rng, config.sorting)
        parent_genomes = pop.genomes if config.selection == FAIR else pop.genomes[parent_idx]
        child_genomes, child_flipped = mutate_genomes(parent_genomes, rng)
        children = evaluate_population(spec, Population.from_genomes(child_genomes))
        combined = concat(pop, children)
        ranked = rank_and_crowd(combined, config.sorting, rng)
        surv_idx, _ = survivor_indices(ranked, pop_size, rng)

        if probe is not None:
            survivor_mask = np.zeros(combined.size, dtype=bool)
            survivor_mask[surv_idx] = True
            survival_frequency_probe(probe, ranked.fronts[0], ranked.crowding, survivor_mask, phase)
        if yz is not None:
            yz.observe(pop.ones[parent_idx], children.ones, child_flipped)

        pop = combined.take(surv_idx)
        counts = np.bincount(pop.ones, minlength=n + 1)
        iterations = t
        phase.observe(t, counts, structure, track_tightening=track_tight)

        if trace.pareto_membership_armed:
            trace.pareto_membership.checked += 1
            if counts[~front_mask].any():
                trace.pareto_membership.violations += 1
        if trace.front_retention_armed:
            trace.front_retention.checked += 1
            now_present = front_mask & (counts > 0)
            if (seen_front_levels & ~now_present).any():
                trace.front_retention.violations += 1
            seen_front_levels |= now_present

        if recorder is not None:
            recorder.maybe_snapshot(t, counts)
        covered = phase.full_front_covered_at is not None

    return RunResult(
        config=config,
        covered=covered,
        iterations=iterations,
        evaluations=pop_size * (iterations + 1),
        coverage=coverage_status(pop, structure),
        phase=phase,
        trace=trace,
        dynamics=recorder.finalize(phase) if recorder is not None else None,
        survival=probe,
        yz=yz,
    )
