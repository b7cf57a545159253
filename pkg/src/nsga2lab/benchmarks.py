"""Two-objective bit-string benchmarks (maximization).

OneJumpZeroJump(n, k), for 2 <= k <= n/4, with o = ones(x), z = n - o:

    f1(x) = k + o  if o <= n - k or o == n,  else n - o
    f2(x) = k + z  if z <= n - k or z == 0,  else n - z

Both objectives are functions of the ones-count alone, which the vectorized
paths exploit. The Pareto set is {x : o in [k, n-k] or o in {0, n}}; the
front has n - 2k + 3 points, two of which (the images of 0^n and 1^n) sit
behind a fitness valley of width k and are called extremal here.

OneMinMax(n): f(x) = (z, o); every solution is Pareto-optimal and the front
has n + 1 points. Its extremal points are the images of 0^n and 1^n, which
lets the same coverage and phase bookkeeping serve both benchmarks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Individual, Population

ONEJUMPZEROJUMP = "onejumpzerojump"
ONEMINMAX = "oneminmax"


@dataclass(frozen=True)
class BenchmarkSpec:
    kind: str
    n: int
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind == ONEJUMPZEROJUMP:
            if self.k is None:
                raise ValueError("onejumpzerojump requires k")
            if not (2 <= self.k and 4 * self.k <= self.n):
                raise ValueError(f"need 2 <= k <= n/4, got n={self.n}, k={self.k}")
        elif self.kind == ONEMINMAX:
            if self.k is not None:
                raise ValueError("oneminmax takes no k")
            if self.n < 2:
                raise ValueError("need n >= 2")
        else:
            raise ValueError(f"unknown benchmark kind: {self.kind!r}")

    @property
    def front_size(self) -> int:
        if self.kind == ONEJUMPZEROJUMP:
            return self.n - 2 * self.k + 3
        return self.n + 1


def ojzj(n: int, k: int) -> BenchmarkSpec:
    return BenchmarkSpec(kind=ONEJUMPZEROJUMP, n=n, k=k)


def oneminmax(n: int) -> BenchmarkSpec:
    return BenchmarkSpec(kind=ONEMINMAX, n=n)


def objectives_for_ones(spec: BenchmarkSpec, ones: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized objective values from ones-counts (exact int64)."""
    o = np.asarray(ones, dtype=np.int64)
    n = spec.n
    if spec.kind == ONEMINMAX:
        return n - o, o.copy()
    k = spec.k
    f1 = np.where((o <= n - k) | (o == n), k + o, n - o)
    f2 = np.where((o >= k) | (o == 0), k + (n - o), o)
    return f1, f2


def evaluate(spec: BenchmarkSpec, individual: Individual) -> tuple[int, int]:
    genome = np.asarray(individual.genome)
    if genome.shape != (spec.n,):
        raise ValueError(f"genome length {genome.shape} does not match n={spec.n}")
    f1, f2 = objectives_for_ones(spec, np.array([genome.sum()]))
    return int(f1[0]), int(f2[0])


def evaluate_population(spec: BenchmarkSpec, pop: Population) -> Population:
    """Attach objective columns; returns the same object for chaining."""
    if pop.n != spec.n:
        raise ValueError(f"population genome length {pop.n} does not match n={spec.n}")
    pop.f1, pop.f2 = objectives_for_ones(spec, pop.ones)
    return pop


@dataclass(frozen=True)
class ParetoStructure:
    """Front geometry plus ones-count masks for the fast coverage paths.

    extremal is ordered (image of 0^n, image of 1^n); extremal_ones likewise.
    ones_in_front / ones_in_inner are boolean masks over ones-count [0..n];
    for these benchmarks objective vectors are determined by the ones-count
    and front membership never collides with off-front counts, so mask-level
    coverage equals vector-level coverage.
    """

    spec: BenchmarkSpec
    front: frozenset[tuple[int, int]]
    inner: frozenset[tuple[int, int]]
    extremal: tuple[tuple[int, int], tuple[int, int]]
    extremal_ones: tuple[int, int]
    ones_in_front: np.ndarray
    ones_in_inner: np.ndarray

    @property
    def size(self) -> int:
        return len(self.front)


def pareto_structure(spec: BenchmarkSpec) -> ParetoStructure:
    n = spec.n
    if spec.kind == ONEJUMPZEROJUMP:
        k = spec.k
        inner_ones = np.arange(k, n - k + 1)
        pareto_ones = np.concatenate([[0], inner_ones, [n]])
    else:
        inner_ones = np.arange(1, n)
        pareto_ones = np.arange(0, n + 1)
    f1, f2 = objectives_for_ones(spec, pareto_ones)
    front = frozenset(zip(f1.tolist(), f2.tolist()))
    fi1, fi2 = objectives_for_ones(spec, inner_ones)
    inner = frozenset(zip(fi1.tolist(), fi2.tolist()))
    lo = objectives_for_ones(spec, np.array([0]))
    hi = objectives_for_ones(spec, np.array([n]))
    extremal = ((int(lo[0][0]), int(lo[1][0])), (int(hi[0][0]), int(hi[1][0])))
    in_front = np.zeros(n + 1, dtype=bool)
    in_front[pareto_ones] = True
    in_inner = np.zeros(n + 1, dtype=bool)
    in_inner[inner_ones] = True
    return ParetoStructure(
        spec=spec,
        front=front,
        inner=inner,
        extremal=extremal,
        extremal_ones=(0, n),
        ones_in_front=in_front,
        ones_in_inner=in_inner,
    )


@dataclass(frozen=True)
class CoverageStatus:
    full_front: bool
    inner_front: bool
    extremal_present: tuple[bool, bool]


def coverage_status(pop: Population, structure: ParetoStructure) -> CoverageStatus:
    """Set-membership coverage of the front by an evaluated population."""
    if not pop.evaluated:
        raise ValueError("population must be evaluated first")
    present = set(zip(pop.f1.tolist(), pop.f2.tolist()))
    return CoverageStatus(
        full_front=structure.front <= present,
        inner_front=structure.inner <= present,
        extremal_present=(
            structure.extremal[0] in present,
            structure.extremal[1] in present,
        ),
    )
