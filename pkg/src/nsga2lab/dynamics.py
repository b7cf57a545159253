"""Population-dynamics instrumentation: phases, occupation snapshots, probes.

Everything here observes a run from the outside; nothing feeds back into
selection or survival. Occupation is indexed by absolute ones-count, so a
snapshot is the bincount of ones over the current population (summing to the
population size, off-front classes included). The snapshot filter keeps the
steady-state window: at or after inner-front coverage, strictly before the
first extremal discovery. Runs that never reach the window contribute no
occupation data and are flagged rather than zero-filled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .benchmarks import ONEJUMPZEROJUMP, BenchmarkSpec, ParetoStructure


def default_snapshot_stride(spec: BenchmarkSpec) -> int:
    """Snapshot cadence: about 50 snapshots over a typical run."""
    if spec.kind == ONEJUMPZEROJUMP:
        horizon = spec.n ** spec.k
    else:
        horizon = spec.n * math.log(spec.n)
    return max(1, round(horizon / 50))


@dataclass
class PhaseState:
    """Sticky first-hit markers, updated from post-survival populations.

    tightening_at is only tracked under shared-permutation tie sorting: it
    marks the first iteration where every inner front value holds at least
    two members, after which the two-per-value survival regime applies.
    """

    inner_front_covered_at: int | None = None
    full_front_covered_at: int | None = None
    first_extremal_at: int | None = None
    both_extremals_at: int | None = None
    tightening_at: int | None = None

    def observe(
        self,
        t: int,
        counts: np.ndarray,
        structure: ParetoStructure,
        track_tightening: bool = False,
    ) -> None:
        present = counts > 0
        if self.inner_front_covered_at is None and present[structure.ones_in_inner].all():
            self.inner_front_covered_at = t
        lo, hi = structure.extremal_ones
        if self.first_extremal_at is None and (present[lo] or present[hi]):
            self.first_extremal_at = t
        if self.both_extremals_at is None and present[lo] and present[hi]:
            self.both_extremals_at = t
        if self.full_front_covered_at is None and present[structure.ones_in_front].all():
            self.full_front_covered_at = t
        if (
            track_tightening
            and self.tightening_at is None
            and (counts[structure.ones_in_inner] >= 2).all()
        ):
            self.tightening_at = t


@dataclass(frozen=True)
class DynamicsSummary:
    """Per-run occupation result: mean bincount over the retained window."""

    level_means: np.ndarray
    retained_snapshots: int
    total_snapshots: int
    window_start: int | None
    window_end: int | None

    @property
    def valid(self) -> bool:
        return self.retained_snapshots > 0


class DynamicsRecorder:
    def __init__(self, n: int, stride: int):
        if stride < 1:
            raise ValueError("stride must be >= 1")
        self.n = n
        self.stride = stride
        self._snapshots: list[tuple[int, np.ndarray]] = []

    def maybe_snapshot(self, t: int, counts: np.ndarray) -> bool:
        """Record the ones-count histogram when t is on the snapshot grid."""
        if t % self.stride != 0:
            return False
        self._snapshots.append((t, counts.copy()))
        return True

    def finalize(self, phase: PhaseState) -> DynamicsSummary:
        """Filter to the steady-state window and average the retained counts.

        Window: inner_front_covered_at <= t, and t < first_extremal_at when
        an extremal point was found (snapshots taken after that discovery
        reflect the endgame, not the inner-front equilibrium).
        """
        start = phase.inner_front_covered_at
        end = phase.first_extremal_at
        retained = []
        if start is not None:
            for t, counts in self._snapshots:
                if t >= start and (end is None or t < end):
                    retained.append(counts)
        if retained:
            level_means = np.mean(np.stack(retained), axis=0)
        else:
            level_means = np.full(self.n + 1, np.nan)
        return DynamicsSummary(
            level_means=level_means,
            retained_snapshots=len(retained),
            total_snapshots=len(self._snapshots),
            window_start=start,
            window_end=end,
        )


@dataclass
class SurvivalFrequencies:
    """Zero-crowding rank-1 survival counters, overall and per phase window."""

    observed: int = 0
    survived: int = 0
    observed_inner: int = 0
    survived_inner: int = 0
    observed_tight: int = 0
    survived_tight: int = 0

    def _rate(self, survived: int, observed: int) -> float | None:
        return survived / observed if observed else None

    @property
    def frequency(self) -> float | None:
        return self._rate(self.survived, self.observed)

    @property
    def frequency_inner(self) -> float | None:
        return self._rate(self.survived_inner, self.observed_inner)

    @property
    def frequency_tight(self) -> float | None:
        return self._rate(self.survived_tight, self.observed_tight)

    def merge(self, other: "SurvivalFrequencies") -> None:
        self.observed += other.observed
        self.survived += other.survived
        self.observed_inner += other.observed_inner
        self.survived_inner += other.survived_inner
        self.observed_tight += other.observed_tight
        self.survived_tight += other.survived_tight


def survival_frequency_probe(
    counters: SurvivalFrequencies,
    rank1_idx: np.ndarray,
    crowding: np.ndarray,
    survivor_mask: np.ndarray,
    phase: PhaseState,
) -> None:
    """Tally survival of zero-crowding rank-1 members for one survival step.

    phase carries the state entering the step, so the window attribution
    (inner-covered, tightening) reflects the population the step acted on.
    """
    zero_cd = rank1_idx[crowding[rank1_idx] == 0.0]
    if zero_cd.size == 0:
        return
    obs = int(zero_cd.size)
    srv = int(survivor_mask[zero_cd].sum())
    counters.observed += obs
    counters.survived += srv
    if phase.inner_front_covered_at is not None:
        counters.observed_inner += obs
        counters.survived_inner += srv
    if phase.tightening_at is not None:
        counters.observed_tight += obs
        counters.survived_tight += srv


@dataclass
class YZCounters:
    """Exploratory per-level tallies, never part of any acceptance gate.

    y_totals[i]: no-flip copies produced by parents at ones-count i.
    z_totals[w]: children arriving at ones-count w via at least one real flip.
    """

    n: int
    iterations: int = 0
    y_totals: np.ndarray = field(default=None)  # type: ignore[assignment]
    z_totals: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.y_totals is None:
            self.y_totals = np.zeros(self.n + 1, dtype=np.int64)
        if self.z_totals is None:
            self.z_totals = np.zeros(self.n + 1, dtype=np.int64)

    def observe(
        self,
        parent_ones: np.ndarray,
        child_ones: np.ndarray,
        child_flipped: np.ndarray,
    ) -> None:
        self.iterations += 1
        copies = ~child_flipped
        if copies.any():
            self.y_totals += np.bincount(parent_ones[copies], minlength=self.n + 1)
        if child_flipped.any():
            self.z_totals += np.bincount(child_ones[child_flipped], minlength=self.n + 1)

    def means(self) -> tuple[np.ndarray, np.ndarray]:
        if self.iterations == 0:
            nan = np.full(self.n + 1, np.nan)
            return nan, nan.copy()
        return self.y_totals / self.iterations, self.z_totals / self.iterations
