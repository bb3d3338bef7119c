"""Entropy functionals, Gram states, sequences, rates, and searches."""

import math

import numpy as np
import pytest

import entropy_lab as el
from entropy_lab import CapExceededError, ValidationError
from entropy_lab.decompositions import Decomposition
from entropy_lab.dynamical import _identification_decomposition, iter_set_partitions

from conftest import random_partition, random_prob, random_system
from oracles import (
    BELL_NUMBERS,
    conditional_information,
    gram_state,
    markov_block_entropy,
    path_rho_afl,
)

S_MU_CHAIN = 0.6365141682948128
H_CHAIN = 0.38352279010702806
WITNESS_VALUE = -0.2876820724517809


class TestMutualInformation:
    def test_trivial_is_zero(self, blur_partition):
        mu = np.array([0.5, 0.5])
        dec = Decomposition([1.0], [mu])
        assert el.mutual_information(mu, dec, blur_partition) == 0.0

    def test_point_decomposition_of_sharp_is_full_entropy(self):
        mu = np.array([0.25, 0.75])
        dec = Decomposition([0.25, 0.75], np.eye(2))
        part = el.sharp_partition([[0], [1]], 2)
        assert el.mutual_information(mu, dec, part) == pytest.approx(
            el.shannon_entropy(mu), abs=1e-12
        )

    def test_rejects_wrong_measure(self, blur_partition):
        dec = Decomposition([1.0], [[0.9, 0.1]])
        with pytest.raises(ValidationError, match="wrong measure"):
            el.mutual_information([0.5, 0.5], dec, blur_partition)

    def test_bounded_by_weight_entropy(self):
        rng = np.random.default_rng(51)
        for _ in range(40):
            n, k = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            mu = random_prob(rng, n)
            part = random_partition(rng, n, k)
            dec = el.from_densities(mu, random_partition(rng, n, 3))
            value = el.mutual_information(mu, dec, part)
            assert -1e-12 <= value
            assert value <= el.shannon_entropy(dec.weights) + 1e-9
            base = el.distribution(mu, part)
            assert value <= el.shannon_entropy(base) + 1e-9


class TestHudFunctional:
    def test_frozen_blur_value(self, two_state_chain, blur_partition):
        assert el.hud_functional(
            two_state_chain.stationary, blur_partition
        ) == pytest.approx(0.1199347117869175, abs=1e-12)

    def test_sharp_extremal_saturates(self, two_state_chain, coin_extremal):
        assert el.hud_functional(
            two_state_chain.stationary, coin_extremal
        ) == pytest.approx(S_MU_CHAIN, abs=1e-12)

    def test_totally_mixing_is_zero(self, two_state_chain):
        part = el.uniform_unsharp(2, 3)
        assert el.hud_functional(two_state_chain.stationary, part) == pytest.approx(
            0.0, abs=1e-15
        )

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(61)
        for _ in range(30):
            n, k = int(rng.integers(2, 6)), int(rng.integers(2, 5))
            mu = random_prob(rng, n)
            part = random_partition(rng, n, k)
            assert el.hud_functional(mu, part) == pytest.approx(
                conditional_information(mu, part.response), abs=1e-12
            )


class TestCntFunctional:
    def test_trivial_is_exact_zero(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        dec = el.trivial_decomposition(doubly_stochastic.stationary, 2)
        value = el.cnt_functional(
            doubly_stochastic.stationary, dec, [part, part]
        )
        assert abs(value) <= 1e-12

    def test_frozen_negative_witness(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        dec = _identification_decomposition(
            doubly_stochastic.stationary, ((0, 1, 1), (0, 1, 1)), (3, 3)
        )
        value = el.cnt_functional(doubly_stochastic.stationary, dec, [part, part])
        assert value == pytest.approx(WITNESS_VALUE, abs=1e-12)

    def test_arity_mismatch(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        dec = el.trivial_decomposition(doubly_stochastic.stationary, 2)
        with pytest.raises(ValidationError, match="partitions"):
            el.cnt_functional(doubly_stochastic.stationary, dec, [part])

    def test_single_time_reduces_to_mutual_information(self, two_state_chain, blur_partition):
        mu = two_state_chain.stationary
        dec = el.from_densities(mu, blur_partition)
        multi = el.MultiDecomposition((dec.n_components,), dec.weights, dec.components)
        assert el.cnt_functional(mu, multi, [blur_partition]) == pytest.approx(
            el.mutual_information(mu, dec, blur_partition), abs=1e-12
        )


class TestCntOnetime:
    def test_closed_form_equals_hud(self, two_state_chain, blur_partition):
        mu = two_state_chain.stationary
        assert el.cnt_onetime(mu, blur_partition) == el.hud_functional(mu, blur_partition)

    def test_brute_force_agrees(self):
        rng = np.random.default_rng(71)
        for _ in range(6):
            n, k = int(rng.integers(2, 5)), int(rng.integers(2, 4))
            mu = random_prob(rng, n)
            part = random_partition(rng, n, k)
            # raises internally if the extremal maximum misses the closed form
            el.cnt_onetime(mu, part, brute_force=True)

    def test_explicit_extremal_maximum(self):
        rng = np.random.default_rng(73)
        mu = random_prob(rng, 3)
        part = random_partition(rng, 3, 3)
        best = max(
            el.mutual_information(mu, dec, part)
            for _, dec in el.extremal_decompositions(mu, 3)
        )
        assert best == pytest.approx(el.hud_functional(mu, part), abs=1e-9)


class TestCntSearch:
    def test_fixture_landscape(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        result = el.cnt_search(doubly_stochastic, part, part, budget=50, seed=11)
        assert result.best_value >= -1e-12
        assert result.negative_identifications >= 1
        assert result.identifications == 3**3 * 3**3
        assert result.random_trials == 50

    def test_deterministic_given_seed(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        a = el.cnt_search(doubly_stochastic, part, budget=20, seed=5)
        b = el.cnt_search(doubly_stochastic, part, budget=20, seed=5)
        assert a.best_value == b.best_value
        assert a.witness_label == b.witness_label
        assert np.array_equal(a.witness.weights, b.witness.weights)

    def test_single_time_matches_closed_form(self, two_state_chain, blur_partition):
        result = el.cnt_search(
            two_state_chain, blur_partition, times=1, budget=40, seed=2
        )
        closed = el.hud_functional(two_state_chain.stationary, blur_partition)
        assert result.best_value == pytest.approx(closed, abs=1e-9)

    def test_default_second_partition_is_evolved(self, two_state_chain, blur_partition):
        explicit = el.cnt_search(
            two_state_chain,
            blur_partition,
            el.evolve(two_state_chain, blur_partition),
            budget=0,
            seed=0,
        )
        default = el.cnt_search(two_state_chain, blur_partition, budget=0, seed=0)
        assert explicit.best_value == default.best_value

    def test_cap(self, doubly_stochastic):
        part = el.sharp_partition([[0, 1], [2]], 3)
        with pytest.raises(CapExceededError):
            el.cnt_search(doubly_stochastic, part, budget=0, seed=0, cap=100)

    def test_budget_zero(self, two_state_chain, coin_extremal):
        result = el.cnt_search(two_state_chain, coin_extremal, budget=0, seed=0)
        assert result.random_trials == 0
        assert result.best_value >= -1e-12


class TestRhoMak:
    def test_frozen_blur(self, two_state_chain, blur_partition):
        rho = el.rho_mak(two_state_chain.stationary, blur_partition)
        base = el.distribution(two_state_chain.stationary, blur_partition)
        assert np.diagonal(rho) == pytest.approx(base, abs=1e-15)
        assert rho[0, 1] == pytest.approx(0.4194191898318613, abs=1e-15)

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(83)
        for _ in range(20):
            n, k = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            mu = random_prob(rng, n)
            part = random_partition(rng, n, k)
            lib = el.rho_mak(mu, part)
            assert np.max(np.abs(lib - gram_state(mu, part.response))) <= 1e-13

    def test_is_density_matrix(self):
        rng = np.random.default_rng(89)
        for _ in range(20):
            n, k = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            part = random_partition(rng, n, k)
            rho = el.rho_mak(random_prob(rng, n), part)
            vals = el.symmetric_eigenvalues(rho)
            assert vals[-1] >= -1e-10
            assert abs(float(np.trace(rho)) - 1.0) <= 1e-10

    def test_sharp_gives_diagonal(self, two_state_chain, coin_extremal):
        rho = el.rho_mak(two_state_chain.stationary, coin_extremal)
        assert rho[0, 1] == 0.0

    def test_dim_cap(self, two_state_chain, coin_extremal):
        refined = el.refine_afl(two_state_chain, coin_extremal, 12)
        with pytest.raises(CapExceededError):
            el.rho_mak(two_state_chain.stationary, refined)


class TestRhoAfl:
    def test_depth_one_equals_gram(self, two_state_chain, blur_partition):
        a = el.rho_afl(two_state_chain, blur_partition, 1)
        m = el.rho_mak(two_state_chain.stationary, blur_partition)
        assert np.max(np.abs(a - m)) <= 1e-12

    def test_matches_path_oracle(self):
        rng = np.random.default_rng(97)
        for _ in range(10):
            n, k, depth = int(rng.integers(2, 4)), int(rng.integers(2, 4)), int(rng.integers(1, 4))
            system = random_system(rng, n)
            part = random_partition(rng, n, k)
            lib = el.rho_afl(system, part, depth)
            ref = path_rho_afl(system, part.response, depth)
            assert np.max(np.abs(lib - ref)) <= 1e-12

    def test_sharp_shortcut_matches_path_oracle(self, two_state_chain, coin_extremal):
        for depth in (1, 2, 3):
            lib = el.rho_afl(two_state_chain, coin_extremal, depth)
            ref = path_rho_afl(two_state_chain, coin_extremal.response, depth)
            assert np.max(np.abs(lib - ref)) <= 1e-12
            off = lib - np.diag(np.diagonal(lib))
            assert np.max(np.abs(off)) == 0.0

    def test_totally_mixing_is_pure(self, two_state_chain):
        part = el.uniform_unsharp(2, 2)
        rho = el.rho_afl(two_state_chain, part, 3)
        assert el.von_neumann_entropy(rho) == pytest.approx(0.0, abs=1e-10)

    def test_is_density_matrix(self):
        rng = np.random.default_rng(101)
        for _ in range(10):
            system = random_system(rng, 3)
            part = random_partition(rng, 3, 2)
            rho = el.rho_afl(system, part, 3)
            assert np.max(np.abs(rho - rho.T)) == 0.0
            assert abs(float(np.trace(rho)) - 1.0) <= 1e-10
            assert el.symmetric_eigenvalues(rho)[-1] >= -1e-10

    def test_dim_cap(self, two_state_chain, blur_partition):
        with pytest.raises(CapExceededError):
            el.rho_afl(two_state_chain, blur_partition, 12)


class TestEntropySequence:
    def test_markov_block_entropy_closed_form(self, two_state_chain, coin_extremal):
        seq = el.entropy_sequence(
            two_state_chain, coin_extremal, el.EntropyKind.KOW, 6
        )
        for depth in range(1, 7):
            assert seq.values[depth - 1] == pytest.approx(
                markov_block_entropy(two_state_chain, depth), abs=1e-10
            )

    def test_increment_convention(self, two_state_chain, coin_extremal):
        seq = el.entropy_sequence(two_state_chain, coin_extremal, el.EntropyKind.KOW, 3)
        assert seq.increments[0] == seq.values[0]
        assert seq.increments[2] == pytest.approx(
            float(seq.values[2] - seq.values[1]), abs=1e-15
        )
        assert seq.ratios[1] == pytest.approx(float(seq.values[1]) / 2.0, abs=1e-15)

    def test_truncation_marker(self, two_state_chain, coin_extremal):
        seq = el.entropy_sequence(
            two_state_chain, coin_extremal, el.EntropyKind.KOW, 6, word_cap=8
        )
        assert seq.truncated_at == 4
        assert seq.n_max == 3

    def test_rejects_bad_nmax(self, two_state_chain, coin_extremal):
        with pytest.raises(ValidationError):
            el.entropy_sequence(two_state_chain, coin_extremal, el.EntropyKind.KOW, 0)

    def test_hud_mak_saturate_for_sharp_extremal(self, two_state_chain, coin_extremal):
        for kind in (el.EntropyKind.HUD, el.EntropyKind.MAK):
            seq = el.entropy_sequence(two_state_chain, coin_extremal, kind, 4)
            assert np.max(np.abs(seq.values - S_MU_CHAIN)) <= 1e-10


class TestRateEstimate:
    def test_markov_rate(self, two_state_chain, coin_extremal):
        seq = el.entropy_sequence(two_state_chain, coin_extremal, el.EntropyKind.KOW, 8)
        est = el.rate_estimate(seq)
        assert est.last_increment == pytest.approx(H_CHAIN, abs=1e-10)
        assert est.last_ratio == pytest.approx(
            (S_MU_CHAIN + 7 * H_CHAIN) / 8.0, abs=1e-10
        )
        assert est.depth == 8

    def test_requires_two_values(self, two_state_chain, coin_extremal):
        seq = el.entropy_sequence(two_state_chain, coin_extremal, el.EntropyKind.KOW, 1)
        with pytest.raises(ValidationError, match="at least two"):
            el.rate_estimate(seq)


class TestIterSetPartitions:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_bell_counts(self, n):
        assert sum(1 for _ in iter_set_partitions(n)) == BELL_NUMBERS[n]

    def test_canonical_order_endpoints(self):
        parts = list(iter_set_partitions(3))
        assert parts[0] == ((0, 1, 2),)
        assert parts[-1] == ((0,), (1,), (2,))

    def test_cells_are_canonical(self):
        for cells in iter_set_partitions(4):
            firsts = [cell[0] for cell in cells]
            assert firsts == sorted(firsts)
            for cell in cells:
                assert list(cell) == sorted(cell)

    def test_max_cells_filter(self):
        # partitions of 4 elements into at most 2 cells: 1 + 7
        assert sum(1 for _ in iter_set_partitions(4, max_cells=2)) == 8


class TestSupOverSharp:
    def test_chain_winner_is_extremal(self, two_state_chain):
        result = el.sup_over_sharp(two_state_chain, el.EntropyKind.KOW, 6)
        assert result.cells == ((0,), (1,))
        assert result.estimate.last_increment == pytest.approx(H_CHAIN, abs=1e-9)
        assert result.candidates == 2

    def test_deterministic_cycle_all_rates_zero(self, three_cycle):
        result = el.sup_over_sharp(three_cycle, el.EntropyKind.KOW, 5)
        assert result.estimate.last_increment == pytest.approx(0.0, abs=1e-10)
        # tie on rate 0 resolves to the lexicographically smallest cell list,
        # which among canonical partitions is the one into singletons
        assert result.cells == ((0,), (1,), (2,))
        assert result.candidates == BELL_NUMBERS[3]

    def test_cell_budget(self, doubly_stochastic):
        result = el.sup_over_sharp(
            doubly_stochastic, el.EntropyKind.KOW, 3, cell_budget=1
        )
        assert result.cells == ((0, 1, 2),)
        assert result.candidates == 1

    def test_rejects_large_systems(self):
        system = el.make_bernoulli(np.full(9, 1.0 / 9.0))
        with pytest.raises(ValidationError, match="at most 8"):
            el.sup_over_sharp(system, el.EntropyKind.KOW, 3)

    def test_rejects_short_horizon(self, two_state_chain):
        with pytest.raises(ValidationError):
            el.sup_over_sharp(two_state_chain, el.EntropyKind.KOW, 1)
