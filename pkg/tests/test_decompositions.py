"""Convex decompositions, marginals, entropy defect, extremal enumeration."""

import numpy as np
import pytest

import entropy_lab as el
from entropy_lab import CapExceededError, ValidationError
from entropy_lab.decompositions import Decomposition, MultiDecomposition

from conftest import random_partition, random_prob


class TestDecomposition:
    def test_mixture(self):
        dec = Decomposition([0.25, 0.75], [[1.0, 0.0], [0.0, 1.0]])
        assert dec.mixture() == pytest.approx([0.25, 0.75], abs=1e-15)

    def test_rejects_bad_weights(self):
        with pytest.raises(ValidationError):
            Decomposition([0.5, 0.4], [[1.0, 0.0], [0.0, 1.0]])

    def test_rejects_bad_component(self):
        with pytest.raises(ValidationError, match="component 1"):
            Decomposition([0.5, 0.5], [[1.0, 0.0], [0.4, 0.7]])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValidationError):
            Decomposition([1.0], [[0.5, 0.5], [0.5, 0.5]])

    def test_check_recombines(self):
        dec = Decomposition([0.5, 0.5], [[1.0, 0.0], [0.0, 1.0]])
        dec.check_recombines([0.5, 0.5])
        with pytest.raises(ValidationError, match="wrong measure"):
            dec.check_recombines([0.9, 0.1])


class TestTrivialDecomposition:
    def test_exact_zero_arity_sizes(self):
        mu = [0.3, 0.7]
        dec = el.trivial_decomposition(mu, 2)
        assert dec.index_sizes == (1, 1)
        assert dec.weights[0] == 1.0
        assert np.array_equal(dec.mixture(), np.asarray(mu))

    def test_rejects_bad_arity(self):
        with pytest.raises(ValidationError):
            el.trivial_decomposition([1.0], 0)


class TestDensities:
    def test_from_densities_weights_and_mixture(self, blur_partition):
        mu = np.array([0.4, 0.6])
        dec = el.from_densities(mu, blur_partition)
        assert dec.weights == pytest.approx(mu @ blur_partition.response, abs=1e-15)
        assert np.max(np.abs(dec.mixture() - mu)) <= 1e-15

    def test_zero_mass_outcome_pruned(self):
        part = el.PartitionOfUnity([[1.0, 0.0], [1.0, 0.0]])
        dec = el.from_densities([0.5, 0.5], part)
        assert dec.n_components == 1

    def test_round_trip_partition(self):
        rng = np.random.default_rng(6)
        mu = random_prob(rng, 4)
        part = random_partition(rng, 4, 3)
        back = el.to_densities(el.from_densities(mu, part), mu)
        assert np.max(np.abs(back.response - part.response)) <= 1e-12

    def test_round_trip_decomposition(self):
        rng = np.random.default_rng(13)
        mu = random_prob(rng, 3)
        part = random_partition(rng, 3, 4)
        dec = el.from_densities(mu, part)
        again = el.from_densities(mu, el.to_densities(dec, mu))
        assert np.max(np.abs(again.weights - dec.weights)) <= 1e-12
        assert np.max(np.abs(again.components - dec.components)) <= 1e-12

    def test_to_densities_requires_positive_measure(self):
        dec = Decomposition([1.0], [[1.0, 0.0]])
        with pytest.raises(ValidationError, match="strictly positive"):
            el.to_densities(dec, [1.0, 0.0])


class TestMultiDecomposition:
    def test_shape_validation(self):
        with pytest.raises(ValidationError):
            MultiDecomposition((2, 2), [0.5, 0.5], [[1.0, 0.0], [0.0, 1.0]])

    def test_marginal_of_product_weights(self):
        a = np.array([0.3, 0.7])
        b = np.array([0.6, 0.4])
        weights = np.outer(a, b).ravel()
        comps = np.tile([0.5, 0.5], (4, 1))
        dec = MultiDecomposition((2, 2), weights, comps)
        m0 = el.multi_marginal(dec, 0)
        m1 = el.multi_marginal(dec, 1)
        assert m0.weights == pytest.approx(a, abs=1e-15)
        assert m1.weights == pytest.approx(b, abs=1e-15)
        assert el.entropy_defect(dec) == pytest.approx(0.0, abs=1e-12)

    def test_marginal_components_are_weighted_averages(self):
        weights = np.array([0.25, 0.25, 0.25, 0.25])
        comps = np.array(
            [[1.0, 0.0], [0.0, 1.0], [0.5, 0.5], [0.25, 0.75]]
        )
        dec = MultiDecomposition((2, 2), weights, comps)
        m0 = el.multi_marginal(dec, 0)
        assert m0.components[0] == pytest.approx([0.5, 0.5], abs=1e-15)
        assert m0.components[1] == pytest.approx([0.375, 0.625], abs=1e-15)

    def test_marginal_axis_out_of_range(self):
        dec = el.trivial_decomposition([1.0], 2)
        with pytest.raises(ValidationError):
            el.multi_marginal(dec, 2)

    def test_entropy_defect_positive_when_correlated(self):
        # Perfectly correlated indices: defect = S(joint marginal pair).
        weights = np.array([0.5, 0.0, 0.0, 0.5])
        comps = np.tile([1.0], (4, 1))
        dec = MultiDecomposition((2, 2), weights, comps)
        assert el.entropy_defect(dec) == pytest.approx(
            el.shannon_entropy([0.5, 0.5]), abs=1e-12
        )

    def test_defect_nonnegative_random(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            weights = random_prob(rng, 6)
            comps = rng.dirichlet(np.ones(3), size=6)
            dec = MultiDecomposition((2, 3), weights, comps)
            assert el.entropy_defect(dec) >= -1e-12


class TestExtremalDecompositions:
    def test_count_and_recombination(self):
        mu = np.array([0.2, 0.3, 0.5])
        items = list(el.extremal_decompositions(mu, 2))
        assert len(items) == 2**3
        for _, dec in items:
            assert np.max(np.abs(dec.mixture() - mu)) <= 1e-12

    def test_finest_decomposition_present(self):
        mu = np.array([0.2, 0.3, 0.5])
        for assignment, dec in el.extremal_decompositions(mu, 3):
            if assignment == (0, 1, 2):
                assert dec.n_components == 3
                assert np.array_equal(dec.components, np.eye(3))
                assert dec.weights == pytest.approx(mu, abs=1e-15)
                break
        else:
            pytest.fail("injective assignment not enumerated")

    def test_single_outcome_gives_trivial(self):
        mu = np.array([0.4, 0.6])
        items = list(el.extremal_decompositions(mu, 1))
        assert len(items) == 1
        assert items[0][1].n_components == 1

    def test_cap(self):
        with pytest.raises(CapExceededError):
            list(el.extremal_decompositions(np.full(8, 0.125), 8, cap=10**6))

    def test_empty_cells_pruned(self):
        mu = np.array([0.5, 0.5])
        for assignment, dec in el.extremal_decompositions(mu, 3):
            if assignment == (0, 0):
                assert dec.n_components == 1
                break
