"""Deterministic NSGA-II experiments on two-objective bit-string benchmarks.

The package has three layers: an exact combinatorial oracle for the
mutation kernel and the closed-form theory constants (oracle), a vectorized
NSGA-II with pluggable crowding tie-sorting and parent selection (engine,
on top of core and benchmarks), and an experiment harness with occupation
and survival instrumentation plus stable CSV outputs (dynamics,
experiments, cli).
"""

from .benchmarks import (
    BenchmarkSpec,
    CoverageStatus,
    ParetoStructure,
    coverage_status,
    evaluate,
    evaluate_population,
    ojzj,
    oneminmax,
    pareto_structure,
)
from .core import Individual, Population, make_rng, random_population, spawn_rep_seeds
from .dynamics import DynamicsSummary, PhaseState, SurvivalFrequencies
from .engine import (
    FAIR,
    FIXED_SHARED,
    RANDOM_TIES,
    TOURNAMENT,
    UNIFORM,
    RankedPopulation,
    RunConfig,
    RunResult,
    crowding_distances,
    mutate_bitwise,
    mutate_genomes,
    rank_and_crowd,
    rank_partition,
    run,
    select_parents,
    select_survivors,
    survivor_indices,
)
from .experiments import (
    AggregateResult,
    CellConfig,
    aggregate,
    cell_id,
    default_max_iterations,
    make_cell,
    run_cell,
)
from .oracle import (
    TheoryBounds,
    VerificationReport,
    naive_rank_partition,
    occupancy_constants,
    theory_bounds,
    transition_matrix,
    verify_arrival_bound,
    verify_crowding_structure,
    verify_jump_bound,
    verify_rank_equivalence,
)

__version__ = "0.1.0"
