"""Ranking, crowding, survival, selection, mutation, and whole runs."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsga2lab import (
    FAIR,
    FIXED_SHARED,
    RANDOM_TIES,
    TOURNAMENT,
    UNIFORM,
    RankedPopulation,
    RunConfig,
    crowding_distances,
    make_rng,
    mutate_bitwise,
    mutate_genomes,
    naive_rank_partition,
    ojzj,
    oneminmax,
    rank_and_crowd,
    rank_partition,
    random_population,
    run,
    select_parents,
    select_survivors,
    survivor_indices,
)
from nsga2lab.benchmarks import evaluate_population
from nsga2lab.core import Population

objective_arrays = st.lists(
    st.tuples(st.integers(min_value=0, max_value=8), st.integers(min_value=0, max_value=8)),
    min_size=1,
    max_size=60,
).map(lambda pairs: (np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])))


class TestRankPartition:
    def test_hand_case(self):
        f1 = np.array([3, 3, 2, 1, 2, 0])
        f2 = np.array([3, 3, 1, 2, 2, 0])
        assert rank_partition(f1, f2).tolist() == [0, 0, 2, 2, 1, 3]

    def test_empty_and_singleton(self):
        assert rank_partition(np.array([]), np.array([])).size == 0
        assert rank_partition(np.array([5]), np.array([1])).tolist() == [0]

    def test_chain_of_dominating_values(self):
        f1 = np.array([1, 2, 3, 4])
        f2 = np.array([1, 2, 3, 4])
        assert rank_partition(f1, f2).tolist() == [3, 2, 1, 0]

    @settings(max_examples=300, deadline=None)
    @given(objective_arrays)
    def test_matches_definitional_oracle(self, arrays):
        f1, f2 = arrays
        assert np.array_equal(rank_partition(f1, f2), naive_rank_partition(f1, f2))


class TestCrowdingDistances:
    def test_unique_interior_values(self):
        # Front images of a 3-bit min/max instance: interior gaps are 2/3
        # per objective, so each interior member scores 4/3.
        f1 = np.array([3, 2, 1, 0])
        f2 = np.array([0, 1, 2, 3])
        for policy in (RANDOM_TIES, FIXED_SHARED):
            d = crowding_distances(f1, f2, policy, make_rng(1))
            assert d[0] == np.inf and d[3] == np.inf
            assert d[1] == pytest.approx(4 / 3)
            assert d[2] == pytest.approx(4 / 3)

    def test_tiny_fronts(self):
        rng = make_rng(2)
        assert crowding_distances(np.array([4]), np.array([4]), RANDOM_TIES, rng)[0] == np.inf
        d = crowding_distances(np.array([4, 1]), np.array([1, 4]), FIXED_SHARED, rng)
        assert d.tolist() == [np.inf, np.inf]
        assert crowding_distances(np.array([]), np.array([]), RANDOM_TIES, rng).size == 0

    def test_shared_ties_give_two_positive_copies(self):
        # Three copies of one value: the shared permutation puts the same two
        # copies at the outside in both objectives, the third scores zero.
        f1 = np.array([2, 2, 2, 5, 8])
        f2 = np.array([8, 8, 8, 5, 2])
        for seed in range(10):
            d = crowding_distances(f1, f2, FIXED_SHARED, make_rng(seed))
            copies = d[:3]
            assert np.isinf(copies).sum() == 2
            assert (copies == 0.0).sum() == 1
            assert d[3] == pytest.approx(2.0)
            assert d[4] == np.inf

    def test_independent_ties_cap_positive_copies(self):
        f1 = np.repeat([2, 5, 8], [6, 1, 1])
        f2 = np.repeat([8, 5, 2], [6, 1, 1])
        for seed in range(10):
            d = crowding_distances(f1, f2, RANDOM_TIES, make_rng(seed))
            assert 1 <= (d[:6] > 0).sum() <= 4
            assert d[6] == pytest.approx(2.0)

    def test_constant_objective_gives_no_interior_credit(self):
        # Zero spread: only the sort endpoints can score.
        f1 = np.array([3, 3, 3])
        f2 = np.array([3, 3, 3])
        d = crowding_distances(f1, f2, FIXED_SHARED, make_rng(5))
        assert np.isinf(d).sum() == 2
        assert (d == 0.0).sum() == 1

    def test_rejects_unknown_policy(self):
        with pytest.raises(ValueError):
            crowding_distances(np.array([1]), np.array([1]), "sorted", make_rng(1))


class TestSurvival:
    def test_exact_fit_has_no_critical_rank(self):
        ranked = RankedPopulation(
            rank_of=np.array([0, 0, 1, 1]),
            fronts=[np.array([0, 1]), np.array([2, 3])],
            crowding=np.array([np.inf, np.inf, 0.5, 0.5]),
        )
        idx, critical = survivor_indices(ranked, 4, make_rng(1))
        assert sorted(idx.tolist()) == [0, 1, 2, 3]
        assert critical is None

    def test_crowding_decides_within_critical_rank(self):
        ranked = RankedPopulation(
            rank_of=np.zeros(4, dtype=np.int64),
            fronts=[np.arange(4)],
            crowding=np.array([0.1, np.inf, 0.7, 0.3]),
        )
        idx, critical = survivor_indices(ranked, 2, make_rng(1))
        assert sorted(idx.tolist()) == [1, 2]
        assert critical == 0

    def test_zero_crowding_ties_break_uniformly(self):
        # 40 rank-0 members, 8 infinitely crowded, 32 tied at zero; 20 seats.
        # Every infinite member survives, and each zero member should take
        # one of the 12 remaining seats with probability 12/32.
        ranked = RankedPopulation(
            rank_of=np.zeros(40, dtype=np.int64),
            fronts=[np.arange(40)],
            crowding=np.concatenate([np.full(8, np.inf), np.zeros(32)]),
        )
        rng = make_rng(77)
        trials = 3000
        counts = np.zeros(40, dtype=np.int64)
        for _ in range(trials):
            idx, critical = survivor_indices(ranked, 20, rng)
            assert critical == 0
            counts[idx] += 1
        assert np.all(counts[:8] == trials)
        zero_rate = counts[8:] / trials
        # 12/32 = 0.375; binomial standard error 0.0088, allow four of them.
        assert np.all(np.abs(zero_rate - 0.375) < 0.036)
        assert abs(zero_rate.mean() - 0.375) < 0.005

    @settings(max_examples=80, deadline=None)
    @given(st.integers(min_value=1, max_value=40), st.integers(min_value=0, max_value=2**31 - 1))
    def test_survivor_set_structure(self, count, seed):
        rng = make_rng(seed)
        pop = evaluate_population(ojzj(12, 3), random_population(12, 40, rng))
        ranked = rank_and_crowd(pop, RANDOM_TIES, rng)
        idx, critical = survivor_indices(ranked, count, rng)
        assert idx.size == count
        assert np.unique(idx).size == count
        ranks = ranked.rank_of[idx]
        if critical is not None:
            # Every member of a better rank is kept, the critical rank is cut.
            assert ranks.max() == critical
            for r in range(critical):
                assert (ranks == r).sum() == ranked.fronts[r].size
        else:
            kept = set(idx.tolist())
            for front in ranked.fronts:
                members = set(front.tolist())
                assert members <= kept or not (members & kept)

    def test_select_survivors_returns_population(self):
        rng = make_rng(9)
        pop = evaluate_population(oneminmax(10), random_population(10, 30, rng))
        survivors, ranked = select_survivors(pop, 15, RANDOM_TIES, rng)
        assert survivors.size == 15
        assert survivors.evaluated
        assert len(ranked.fronts) >= 1

    def test_rank_and_crowd_requires_evaluation(self):
        with pytest.raises(ValueError):
            rank_and_crowd(Population.from_genomes(np.zeros((3, 4), dtype=np.uint8)),
                           RANDOM_TIES, make_rng(1))


class TestParentSelection:
    def test_fair_is_everyone_once(self):
        pop = evaluate_population(oneminmax(6), random_population(6, 10, make_rng(1)))
        assert select_parents(pop, FAIR, make_rng(2)).tolist() == list(range(10))

    def test_uniform_counts_are_flat(self):
        pop = evaluate_population(oneminmax(6), random_population(6, 20, make_rng(1)))
        rng = make_rng(404)
        counts = np.zeros(20, dtype=np.int64)
        calls = 5000
        for _ in range(calls):
            counts += np.bincount(select_parents(pop, UNIFORM, rng), minlength=20)
        per_member = counts / calls
        assert np.all(np.abs(per_member - 1.0) < 0.05)

    def test_tournament_prefers_the_dominant_member(self):
        # Member 0 dominates member 1, so a slot picks 0 unless both draws
        # hit 1: probability 3/4.
        pop = evaluate_population(oneminmax(2), Population.from_genomes(
            np.array([[1, 0], [0, 0]], dtype=np.uint8)))
        pop.f1 = np.array([5, 1])
        pop.f2 = np.array([5, 1])
        rng = make_rng(505)
        wins = 0
        draws = 0
        for _ in range(5000):
            picked = select_parents(pop, TOURNAMENT, rng)
            wins += int((picked == 0).sum())
            draws += picked.size
        assert abs(wins / draws - 0.75) < 0.02

    def test_tournament_output_shape(self):
        pop = evaluate_population(oneminmax(8), random_population(8, 12, make_rng(3)))
        picked = select_parents(pop, TOURNAMENT, make_rng(4))
        assert picked.shape == (12,)
        assert np.all((0 <= picked) & (picked < 12))

    def test_rejects_unknown_mode(self):
        pop = evaluate_population(oneminmax(4), random_population(4, 4, make_rng(1)))
        with pytest.raises(ValueError):
            select_parents(pop, "elitist", make_rng(1))


class TestMutation:
    def test_flip_rate_is_one_over_n(self):
        rng = make_rng(606)
        n = 50
        total_flips = 0
        calls = 20_000
        genome = np.zeros(n, dtype=np.uint8)
        for _ in range(calls):
            total_flips += int(mutate_bitwise(genome, rng).sum())
        mean_flips = total_flips / calls
        assert abs(mean_flips - 1.0) < 0.03

    def test_no_flip_probability(self):
        # Probability that a 50-bit genome survives mutation untouched:
        # (1 - 1/50)^50, about 0.3642.
        rng = make_rng(707)
        n = 50
        unchanged = 0
        total = 1_000_000
        chunk = 100_000
        base = np.zeros((chunk, n), dtype=np.uint8)
        for _ in range(total // chunk):
            _, flipped = mutate_genomes(base, rng)
            unchanged += int((~flipped).sum())
        expected = (1 - 1 / n) ** n
        assert abs(unchanged / total - expected) / expected < 0.02

    def test_flipped_flag_matches_actual_change(self):
        rng = make_rng(808)
        genomes = random_population(30, 500, rng).genomes
        children, flipped = mutate_genomes(genomes, rng)
        actually_changed = (children != genomes).any(axis=1)
        assert np.array_equal(flipped, actually_changed)

    def test_mutation_preserves_shape_and_alphabet(self):
        rng = make_rng(909)
        genomes = random_population(17, 40, rng).genomes
        children, _ = mutate_genomes(genomes, rng)
        assert children.shape == genomes.shape
        assert set(np.unique(children)) <= {0, 1}


class TestRunConfigValidation:
    def test_rejects_bad_values(self):
        spec = oneminmax(8)
        with pytest.raises(ValueError):
            RunConfig(spec=spec, pop_size=0, seed=1, max_iterations=10)
        with pytest.raises(ValueError):
            RunConfig(spec=spec, pop_size=4, seed=1, max_iterations=0)
        with pytest.raises(ValueError):
            RunConfig(spec=spec, pop_size=4, seed=1, max_iterations=10, sorting="stable")
        with pytest.raises(ValueError):
            RunConfig(spec=spec, pop_size=4, seed=1, max_iterations=10, selection="rank")


class TestFullRuns:
    def test_small_run_covers_and_accounts_evaluations(self):
        config = RunConfig(spec=oneminmax(8), pop_size=36, seed=5, max_iterations=2000)
        result = run(config)
        assert result.covered
        assert result.coverage.full_front
        assert result.evaluations == 36 * (result.iterations + 1)
        assert result.phase.full_front_covered_at is not None
        assert result.trace.ok

    def test_initial_coverage_means_zero_iterations(self):
        # 64 random 2-bit genomes miss one of the three levels with
        # vanishing probability, so the run ends before iterating.
        config = RunConfig(spec=oneminmax(2), pop_size=64, seed=3, max_iterations=10)
        result = run(config)
        assert result.covered
        assert result.iterations == 0
        assert result.evaluations == 64

    def test_budget_exhaustion_reports_uncovered(self):
        # The population cannot even hold the front, so coverage never happens.
        config = RunConfig(spec=oneminmax(30), pop_size=8, seed=1, max_iterations=3)
        result = run(config)
        assert not result.covered
        assert result.iterations == 3
        assert result.evaluations == 8 * 4

    def test_run_is_deterministic_for_a_seed(self):
        config = RunConfig(spec=ojzj(8, 2), pop_size=28, seed=11, max_iterations=50_000)
        a = run(config)
        b = run(config)
        assert (a.iterations, a.evaluations, a.covered) == (b.iterations, b.evaluations, b.covered)
        assert a.phase.full_front_covered_at == b.phase.full_front_covered_at

    def test_trace_arming_conditions(self):
        # 28 = 4x front size arms retention under independent tie sorting.
        armed = run(RunConfig(spec=ojzj(8, 2), pop_size=28, seed=2, max_iterations=50_000))
        assert armed.trace.front_retention_armed
        assert armed.trace.front_retention.violations == 0
        small = run(RunConfig(spec=ojzj(8, 2), pop_size=14, seed=2, max_iterations=50_000))
        assert not small.trace.front_retention_armed
        # Shared ties need only a 2x population for the same guarantee.
        fixed = run(RunConfig(spec=ojzj(8, 2), pop_size=14, seed=2, max_iterations=50_000,
                              sorting=FIXED_SHARED))
        assert fixed.trace.front_retention_armed

    def test_probes_populate_optional_results(self):
        config = RunConfig(
            spec=oneminmax(12), pop_size=20, seed=21, max_iterations=5000,
            record_dynamics=True, snapshot_stride=1,
            probe_survival=True, probe_yz=True,
        )
        result = run(config)
        assert result.dynamics is not None
        assert result.survival is not None and result.survival.observed >= 0
        assert result.yz is not None
        y, z = result.yz.y_totals, result.yz.z_totals
        # Every child is either an untouched copy or a real mutation.
        assert y.sum() + z.sum() == 20 * result.iterations

    def test_dynamics_window_sums_to_population_size(self):
        config = RunConfig(
            spec=oneminmax(12), pop_size=24, seed=34, max_iterations=5000,
            record_dynamics=True, snapshot_stride=1,
        )
        result = run(config)
        assert result.dynamics.valid
        assert result.dynamics.level_means.sum() == pytest.approx(24.0)
        assert result.dynamics.retained_snapshots <= result.dynamics.total_snapshots

        windowless = run(RunConfig(
            spec=oneminmax(12), pop_size=24, seed=36, max_iterations=5000,
            record_dynamics=True, snapshot_stride=1,
        ))
        assert not windowless.dynamics.valid
        assert np.isnan(windowless.dynamics.level_means).all()
