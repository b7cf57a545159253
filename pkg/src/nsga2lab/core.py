"""Bit-string populations and the randomness contract.

Genomes are numpy uint8 arrays with values in {0, 1}; bit 0 is the leftmost
character of the serialized form. Populations store genomes as a (size, n)
matrix plus cached ones-counts, with objective columns attached by the
benchmark evaluator. All randomness flows through numpy Generator(PCG64)
instances; repetitions of an experiment derive order-independent integer
seeds from a single root seed so that any row of an output file can be
reproduced in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    """Build the canonical generator for a seed."""
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rep_seeds(root_seed: int, reps: int) -> list[int]:
    """Derive one integer seed per repetition from a root seed.

    For reps > 1 the seeds are independent draws from
    SeedSequence(root_seed). A single repetition uses the root seed itself,
    which closes the reproduction loop: any recorded per-rep seed can be
    replayed alone as a one-rep cell and produce byte-identical output.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if root_seed < 0:
        raise ValueError("root_seed must be >= 0")
    if reps == 1:
        return [root_seed]
    words = np.random.SeedSequence(root_seed).generate_state(reps, dtype=np.uint64)
    return [int(w) for w in words]


def ones_count(genome: np.ndarray) -> int:
    return int(np.asarray(genome).sum())


def genome_to_str(genome: np.ndarray) -> str:
    return "".join("1" if b else "0" for b in np.asarray(genome))


def genome_from_str(text: str) -> np.ndarray:
    if not text or any(ch not in "01" for ch in text):
        raise ValueError(f"genome string must be nonempty over {{0,1}}: {text!r}")
    return np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")


@dataclass(frozen=True, eq=False)
class Individual:
    """One member at the API edge: a genome and, once evaluated, objectives."""

    genome: np.ndarray
    objectives: tuple[int, int] | None = None

    @property
    def ones(self) -> int:
        return ones_count(self.genome)

    def __repr__(self) -> str:
        obj = "unevaluated" if self.objectives is None else str(self.objectives)
        return f"Individual({genome_to_str(self.genome)}, {obj})"


@dataclass
class Population:
    """Columnar population: genome matrix, ones-counts, objective columns.

    f1/f2 are None until a benchmark evaluates the population. ones is always
    populated (it is cheap and every benchmark here is a function of it).
    """

    genomes: np.ndarray
    ones: np.ndarray
    f1: np.ndarray | None = None
    f2: np.ndarray | None = None

    @classmethod
    def from_genomes(cls, genomes: np.ndarray) -> "Population":
        genomes = np.ascontiguousarray(genomes, dtype=np.uint8)
        if genomes.ndim != 2:
            raise ValueError("genome matrix must be 2-D (size, n)")
        return cls(genomes=genomes, ones=genomes.sum(axis=1).astype(np.int64))

    @property
    def size(self) -> int:
        return self.genomes.shape[0]

    @property
    def n(self) -> int:
        return self.genomes.shape[1]

    @property
    def evaluated(self) -> bool:
        return self.f1 is not None

    def member(self, i: int) -> Individual:
        obj = None
        if self.f1 is not None and self.f2 is not None:
            obj = (int(self.f1[i]), int(self.f2[i]))
        return Individual(genome=self.genomes[i].copy(), objectives=obj)

    def members(self) -> list[Individual]:
        return [self.member(i) for i in range(self.size)]

    def take(self, idx: np.ndarray) -> "Population":
        """Row-subset (or reorder) preserving evaluation state."""
        return Population(
            genomes=self.genomes[idx],
            ones=self.ones[idx],
            f1=None if self.f1 is None else self.f1[idx],
            f2=None if self.f2 is None else self.f2[idx],
        )


def random_population(n: int, size: int, rng: np.random.Generator) -> Population:
    """Sample `size` uniform random bit strings of length n."""
    if n < 1 or size < 1:
        raise ValueError("n and size must be >= 1")
    genomes = rng.integers(0, 2, size=(size, n), dtype=np.uint8)
    return Population.from_genomes(genomes)


def concat(a: Population, b: Population) -> Population:
    """Stack two populations; objective columns merge only if both carry them."""
    if a.n != b.n:
        raise ValueError("populations must share genome length")
    both = a.evaluated and b.evaluated
    return Population(
        genomes=np.concatenate([a.genomes, b.genomes]),
        ones=np.concatenate([a.ones, b.ones]),
        f1=np.concatenate([a.f1, b.f1]) if both else None,
        f2=np.concatenate([a.f2, b.f2]) if both else None,
    )
