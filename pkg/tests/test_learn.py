from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from encdec.exceptions import ArgumentError
from encdec.learn import (
    DecisionTree,
    Forest,
    cross_validate,
    fit_forest,
    grow_tree,
    loo_accuracy,
    permutation_importance,
    predict,
    split_column,
)
from encdec.models import ForestConfig, PermutationScheme
from encdec.storage import read_subject_csv

def leaf(counts) -> DecisionTree:
    return DecisionTree(
        feature=np.array([-1]),
        threshold=np.array([np.nan]),
        left=np.array([-1]),
        right=np.array([-1]),
        counts=np.array([counts]),
    )

@pytest.fixture
def separable(dataset_factory):
    """First feature separates the classes, the second is constant"""
    rng = np.random.default_rng(0)
    condition = np.tile([0, 1], 20)
    signal = condition * 4.0 + rng.normal(scale=0.3, size=40)
    return dataset_factory(condition, np.column_stack([signal, np.zeros(40)]))


class TestTrees:
    """Test cases for single decision trees"""

    def test_midpoint_split(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0, 0, 1, 1])
        tree = grow_tree(X, y, mtry=1, rng=np.random.default_rng(0))
        assert tree.n_nodes == 3
        assert tree.feature[0] == 0
        assert tree.threshold[0] == pytest.approx(2.5)
        np.testing.assert_array_equal(tree.predict(X), y)

    def test_pure_node_is_a_leaf(self):
        X = np.array([[1.0], [2.0], [3.0]])
        tree = grow_tree(X, np.array([1, 1, 1]), mtry=1, rng=np.random.default_rng(0))
        assert tree.n_nodes == 1
        assert tree.used_features == frozenset()

    def test_unsplittable_node_is_a_leaf(self):
        X = np.zeros((4, 1))
        tree = grow_tree(X, np.array([0, 1, 0, 1]), mtry=1, rng=np.random.default_rng(0))
        assert tree.n_nodes == 1
        assert tree.leaf_class[0] == 0

    def test_grows_to_purity(self):
        rng = np.random.default_rng(1)
        X = rng.normal(size=(30, 3))
        y = rng.integers(0, 2, size=30)
        tree = grow_tree(X, y, mtry=3, rng=np.random.default_rng(2))
        np.testing.assert_array_equal(tree.predict(X), y)

    def test_lowest_threshold_wins_ties(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0, 1, 1, 0])
        tree = grow_tree(X, y, mtry=1, rng=np.random.default_rng(0))
        assert tree.threshold[0] == pytest.approx(1.5)

    @pytest.mark.parametrize('seed', range(12))
    def test_root_split_matches_exhaustive_search(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 13))
        d = int(rng.integers(1, 3))
        X = rng.integers(0, 5, size=(n, d)).astype(float)
        y = np.resize([0, 1], n)
        rng.shuffle(y)

        best = None
        for j in range(d):
            values = sorted(set(X[:, j]))
            for low, high in zip(values, values[1:]):
                t = Fraction(low) + (Fraction(high) - Fraction(low)) / 2
                impurity = Fraction(0)
                for side in (X[:, j] <= float(t), X[:, j] > float(t)):
                    size = int(side.sum())
                    ones = int(y[side].sum())
                    gini = 1 - Fraction(ones, size) ** 2 - Fraction(size - ones, size) ** 2
                    impurity += Fraction(size, n) * gini
                if best is None or (impurity, j, t) < best:
                    best = (impurity, j, t)

        tree = grow_tree(X, y, mtry=d, rng=np.random.default_rng(seed))
        if best is None:
            assert tree.n_nodes == 1
        else:
            assert tree.feature[0] == best[1]
            assert tree.threshold[0] == float(best[2])


class TestForest:
    """Test cases for forest fitting and voting"""

    def test_vote_ties_go_to_smaller_label(self, tmp_path):
        path = tmp_path / 'subject_01.csv'
        path.write_text('condition,X1\nrest,0.1\nplan,0.4\nrest,0.3\nplan,0.9\n')
        subject = read_subject_csv(path)
        assert subject.labels == ('rest', 'plan')
        assert subject.dataset.tie_class == 1

        forest = Forest(
            trees=(leaf([1, 0]), leaf([0, 1])),
            seed=0,
            config=ForestConfig(n_trees=2),
            n_features=1,
            tie_class=subject.dataset.tie_class,
        )
        assert subject.labels[predict(forest, [0.0])] == 'plan'

    def test_fitted_forest_carries_tie_class(self, dataset_factory):
        data = dataset_factory([0, 1, 0, 1], [[0.1], [0.5], [0.2], [0.7]])
        swapped = data.model_copy(update={'labels': ('rest', 'plan')})
        assert fit_forest(data, ForestConfig(n_trees=3), seed=0).tie_class == 0
        assert fit_forest(swapped, ForestConfig(n_trees=3), seed=0).tie_class == 1

    def test_leaf_ties_go_to_tie_class(self):
        tree = leaf([2, 2])
        assert tree.leaf_class[0] == 0
        assert replace(tree, tie_class=1).leaf_class[0] == 1

    def test_vote_ties_go_to_zero(self):
        forest = Forest(
            trees=(leaf([0, 1]), leaf([1, 0])),
            seed=0,
            config=ForestConfig(n_trees=2),
            n_features=1,
        )
        assert predict(forest, [0.0]) == 0

    def test_majority_vote(self):
        forest = Forest(
            trees=(leaf([0, 1]), leaf([0, 3]), leaf([2, 0])),
            seed=0,
            config=ForestConfig(n_trees=3),
            n_features=1,
        )
        assert predict(forest, [1.0]) == 1

    def test_row_length_checked(self, separable):
        forest = fit_forest(separable, ForestConfig(n_trees=3), seed=0)
        with pytest.raises(ArgumentError, match='features'):
            predict(forest, [1.0])

    def test_deterministic(self, separable):
        config = ForestConfig(n_trees=10)
        first = fit_forest(separable, config, seed=4)
        second = fit_forest(separable, config, seed=4)
        np.testing.assert_array_equal(
            first.votes(separable.features), second.votes(separable.features)
        )

    def test_bootstrap_bags(self, dataset_factory):
        rng = np.random.default_rng(2)
        data = dataset_factory(np.tile([0, 1], 250), rng.normal(size=(500, 2)))
        forest = fit_forest(data, ForestConfig(n_trees=30), seed=1)
        assert np.mean(forest.bag_unique_fraction) == pytest.approx(0.632, abs=0.03)

    def test_constant_feature_never_used(self, separable):
        forest = fit_forest(separable, ForestConfig(n_trees=20, mtry=2), seed=0)
        assert all(1 not in tree.used_features for tree in forest.trees)

    def test_mtry_resolution(self):
        assert ForestConfig().resolve_mtry(6) == 2
        assert ForestConfig().resolve_mtry(1) == 1
        with pytest.raises(ArgumentError, match='exceeds'):
            ForestConfig(mtry=4).resolve_mtry(3)


class TestCrossValidation:
    """Test cases for PE* and permutation importance"""

    def test_leave_one_out(self, separable):
        result = cross_validate(separable, ForestConfig(n_trees=11), seed=0)
        assert len(result.folds) == separable.n
        assert result.pe_star == pytest.approx(100.0)

    def test_k_fold(self, separable):
        config = ForestConfig(n_trees=11, cv_folds=5)
        result = cross_validate(separable, config, seed=0)
        assert len(result.folds) == 5
        assert sorted(np.concatenate([f.test for f in result.folds])) == list(range(40))
        assert loo_accuracy(separable, config, seed=0) == pytest.approx(100.0)

    def test_noise_is_near_chance(self, dataset_factory):
        rng = np.random.default_rng(7)
        data = dataset_factory(np.tile([0, 1], 40), rng.normal(size=(80, 2)))
        pe_star = loo_accuracy(data, ForestConfig(n_trees=25, cv_folds=5), seed=3)
        assert 25.0 <= pe_star <= 75.0

    def test_needs_four_trials(self, dataset_factory):
        data = dataset_factory([0, 1, 0], [[0.1], [0.5], [0.2]])
        with pytest.raises(ArgumentError, match='at least 4'):
            cross_validate(data, ForestConfig(n_trees=3), seed=0)

    def test_importance(self, separable):
        config = ForestConfig(n_trees=11, cv_folds=5)
        result = permutation_importance(separable, config, n_perm=49, seed=2)
        informative, constant = result.p_values
        assert informative.value == pytest.approx(1 / 50)
        assert constant.value == pytest.approx(1.0)
        assert result.pe_star == pytest.approx(100.0)
        assert result.mean_permuted_pe[0] < 75.0

    def test_importance_deterministic(self, separable):
        config = ForestConfig(n_trees=5, cv_folds=4)
        first = permutation_importance(separable, config, n_perm=19, seed=8)
        second = permutation_importance(separable, config, n_perm=19, seed=8)
        assert first == second

    def test_importance_needs_permutations(self, separable):
        with pytest.raises(ArgumentError):
            permutation_importance(separable, ForestConfig(n_trees=3), n_perm=0)


class TestPermutationSchemes:
    """Test cases for splitting a column into a fixed part and a permuted part"""

    @pytest.fixture
    def correlated(self):
        rng = np.random.default_rng(11)
        x1 = rng.normal(size=200)
        x2 = 0.8 * x1 + rng.normal(size=200)
        return np.column_stack([x1, x2, rng.normal(size=200)])

    def test_global_permutes_raw_column(self, correlated):
        base, residual = split_column(correlated, 1, PermutationScheme.GLOBAL)
        np.testing.assert_array_equal(base, 0.0)
        np.testing.assert_array_equal(residual, correlated[:, 1])

    def test_conditional_residual_uncorrelated_with_others(self, correlated):
        base, residual = split_column(correlated, 1, PermutationScheme.CONDITIONAL)
        np.testing.assert_allclose(base + residual, correlated[:, 1])
        others = np.delete(correlated, 1, axis=1)
        np.testing.assert_allclose(
            others.T @ (residual - residual.mean()), 0.0, atol=1e-8
        )
        assert np.corrcoef(base, correlated[:, 0])[0, 1] > 0.99

    def test_single_feature_falls_back_to_global(self):
        X = np.arange(6, dtype=float).reshape(-1, 1)
        base, residual = split_column(X, 0, PermutationScheme.CONDITIONAL)
        np.testing.assert_array_equal(base, 0.0)
        np.testing.assert_array_equal(residual, X[:, 0])

    def test_global_scheme_hits_mediated_feature_harder(self, dataset_factory):
        # S -> X1 -> X2: X2 only carries information that X1 already holds
        rng = np.random.default_rng(5)
        condition = np.tile([0, 1], 100)
        x1 = 1.5 * condition + rng.normal(scale=0.5, size=200)
        x2 = x1 + rng.normal(scale=0.3, size=200)
        data = dataset_factory(condition, np.column_stack([x1, x2]))

        drop = {}
        for scheme in PermutationScheme:
            config = ForestConfig(n_trees=25, cv_folds=5, mtry=1, permutation=scheme)
            result = permutation_importance(data, config, n_perm=49, seed=3)
            drop[scheme] = result.pe_star - result.mean_permuted_pe[1]
        assert drop[PermutationScheme.GLOBAL] > 0
        assert drop[PermutationScheme.GLOBAL] > drop[PermutationScheme.CONDITIONAL]
