"""Random-forest classifier grown from scratch

Trees use n-draw bootstrap bags, ``mtry`` candidate features per node, Gini
splits at midpoints between consecutive distinct values, unlimited depth and
leaves of size >= 1. Classes are coded 0/1; leaf and vote ties go to
``tie_class``, the code of the lexicographically smaller condition label.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from sklearn.metrics import accuracy_score
from sklearn.model_selection import LeaveOneOut, StratifiedKFold

from ..exceptions import ArgumentError
from ..models.analysis import ForestConfig
from ..models.data import Dataset
from ..stats import streams

logger = logging.getLogger(__name__)

_IMPURITY_DECIMALS = 12


@dataclass(frozen=True)
class DecisionTree:
    feature: np.ndarray  # -1 marks a leaf
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 2) training class counts
    tie_class: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @cached_property
    def leaf_class(self) -> np.ndarray:
        zeros, ones = self.counts[:, 0], self.counts[:, 1]
        return np.where(ones == zeros, self.tie_class, ones > zeros).astype(np.int64)

    @cached_property
    def used_features(self) -> FrozenSet[int]:
        return frozenset(int(j) for j in self.feature if j >= 0)

    def predict(self, X: np.ndarray) -> np.ndarray:
        nodes = np.zeros(len(X), dtype=np.intp)
        while True:
            split_on = self.feature[nodes]
            active = np.flatnonzero(split_on >= 0)
            if active.size == 0:
                break
            current = nodes[active]
            go_left = X[active, split_on[active]] <= self.threshold[current]
            nodes[active] = np.where(go_left, self.left[current], self.right[current])
        return self.leaf_class[nodes]


@dataclass(frozen=True)
class Forest:
    trees: Tuple[DecisionTree, ...]
    seed: int
    config: ForestConfig
    n_features: int
    bag_unique_fraction: Tuple[float, ...] = field(default=())
    tie_class: int = 0

    def votes(self, X: np.ndarray) -> np.ndarray:
        """Number of trees voting for class 1, per row"""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ArgumentError(
                f'Expected rows of length {self.n_features}, got shape {X.shape}'
            )
        total = np.zeros(len(X), dtype=np.int64)
        for tree in self.trees:
            total += tree.predict(X)
        return total

    def decide(self, votes: np.ndarray) -> np.ndarray:
        """Majority decision from class-1 vote counts"""
        doubled = 2 * np.asarray(votes)
        n = len(self.trees)
        return np.where(doubled == n, self.tie_class, doubled > n).astype(np.int64)

    def predict_rows(self, X: np.ndarray) -> np.ndarray:
        return self.decide(self.votes(X))


def _best_threshold(x: np.ndarray, y: np.ndarray) -> Optional[Tuple[float, float]]:
    order = np.argsort(x, kind='stable')
    xs, ys = x[order], y[order]
    n = len(xs)
    distinct = xs[:-1] < xs[1:]
    if not distinct.any():
        return None

    n_left = np.arange(1, n, dtype=float)
    n_right = n - n_left
    ones_left = np.cumsum(ys)[:-1].astype(float)
    ones_right = ys.sum() - ones_left
    purity_left = (ones_left**2 + (n_left - ones_left) ** 2) / n_left
    purity_right = (ones_right**2 + (n_right - ones_right) ** 2) / n_right
    impurity = np.round((n - purity_left - purity_right) / n, _IMPURITY_DECIMALS)
    impurity[~distinct] = np.inf

    k = int(np.argmin(impurity))  # first minimum: lowest threshold
    low, high = xs[k], xs[k + 1]
    threshold = low + (high - low) / 2.0
    if not threshold < high:
        threshold = low
    return float(impurity[k]), float(threshold)


def _best_split(
    X: np.ndarray, y: np.ndarray, idx: np.ndarray, mtry: int, rng: np.random.Generator
) -> Optional[Tuple[int, float]]:
    best = None
    for position, j in enumerate(rng.permutation(X.shape[1])):
        if position >= mtry and best is not None:
            break
        candidate = _best_threshold(X[idx, j], y[idx])
        if candidate is None:
            continue
        impurity, threshold = candidate
        key = (impurity, int(j), threshold)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    return best[1], best[2]


def grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    mtry: int,
    rng: np.random.Generator,
    sample_idx: Optional[np.ndarray] = None,
    tie_class: int = 0,
) -> DecisionTree:
    """Grow one unpruned tree on the rows ``sample_idx`` (all rows by default)"""
    idx = np.arange(len(y)) if sample_idx is None else np.asarray(sample_idx)
    feature: List[int] = []
    threshold: List[float] = []
    left: List[int] = []
    right: List[int] = []
    counts: List[np.ndarray] = []

    def new_node(rows: np.ndarray) -> int:
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[rows], minlength=2))
        return len(feature) - 1

    stack = [(new_node(idx), idx)]
    while stack:
        node, rows = stack.pop()
        if counts[node][0] == 0 or counts[node][1] == 0:
            continue
        split = _best_split(X, y, rows, mtry, rng)
        if split is None:
            continue
        j, t = split
        goes_left = X[rows, j] <= t
        left_rows, right_rows = rows[goes_left], rows[~goes_left]
        feature[node], threshold[node] = j, t
        left[node] = new_node(left_rows)
        right[node] = new_node(right_rows)
        # depth-first, left subtree first
        stack.append((right[node], right_rows))
        stack.append((left[node], left_rows))

    return DecisionTree(
        feature=np.array(feature, dtype=np.intp),
        threshold=np.array(threshold, dtype=float),
        left=np.array(left, dtype=np.intp),
        right=np.array(right, dtype=np.intp),
        counts=np.array(counts, dtype=np.int64),
        tie_class=tie_class,
    )


def _check_labels(y: np.ndarray) -> None:
    if len(np.unique(y)) < 2:
        raise ArgumentError('Forest training data must contain both classes')


def fit_arrays(
    X: np.ndarray,
    y: np.ndarray,
    config: ForestConfig,
    seed: int,
    tie_class: int = 0,
) -> Forest:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    _check_labels(y)
    n, d = X.shape
    mtry = config.resolve_mtry(d)

    trees = []
    unique_fraction = []
    for t in range(config.n_trees):
        rng = streams.stream(seed, streams.TREE, t)
        bag = rng.integers(0, n, size=n)
        unique_fraction.append(len(np.unique(bag)) / n)
        trees.append(grow_tree(X, y, mtry, rng, bag, tie_class))
    return Forest(
        trees=tuple(trees),
        seed=seed,
        config=config,
        n_features=d,
        bag_unique_fraction=tuple(unique_fraction),
        tie_class=tie_class,
    )


def fit_forest(data: Dataset, config: ForestConfig, seed: int) -> Forest:
    """Fit a forest on one subject's trials; deterministic given the seed"""
    forest = fit_arrays(data.features, data.condition, config, seed, data.tie_class)
    logger.debug(
        f'{data.subject}: {len(forest.trees)} trees, '
        f'{sum(t.n_nodes for t in forest.trees)} nodes'
    )
    return forest


def predict(forest: Forest, row: Sequence[float]) -> int:
    """Majority vote for a single row; ties go to the forest's ``tie_class``"""
    row = np.asarray(row, dtype=float)
    if row.ndim != 1 or len(row) != forest.n_features:
        raise ArgumentError(
            f'Row of length {row.size} for a forest over {forest.n_features} features'
        )
    return int(forest.predict_rows(row.reshape(1, -1))[0])


@dataclass(frozen=True)
class Fold:
    test: np.ndarray
    forest: Optional[Forest]  # None when the training rows hold a single class


@dataclass(frozen=True)
class CrossValidation:
    folds: Tuple[Fold, ...]
    n: int
    correct: int

    @property
    def pe_star(self) -> float:
        return 100.0 * self.correct / self.n


def _splits(y: np.ndarray, config: ForestConfig, seed: int):
    placeholder = np.zeros((len(y), 1))
    if config.cv_folds is None:
        return list(LeaveOneOut().split(placeholder))
    splitter = StratifiedKFold(
        n_splits=config.cv_folds,
        shuffle=True,
        random_state=streams.derive_seed(seed, streams.FOLD),
    )
    return list(splitter.split(placeholder, y))


def _fit_fold(
    X: np.ndarray,
    y: np.ndarray,
    train: np.ndarray,
    config: ForestConfig,
    seed: int,
    tie_class: int,
) -> Optional[Forest]:
    if len(np.unique(y[train])) < 2:
        return None
    return fit_arrays(X[train], y[train], config, seed, tie_class)


def cross_validate(data: Dataset, config: ForestConfig, seed: int) -> CrossValidation:
    """Fit one forest per fold (leave-one-out unless ``cv_folds`` is set)"""
    if data.n < 4:
        raise ArgumentError(f'Cross-validation needs at least 4 trials, got {data.n}')
    X, y = data.features, data.condition
    _check_labels(y)

    splits = _splits(y, config, seed)
    forests = Parallel(n_jobs=config.n_jobs)(
        delayed(_fit_fold)(
            X, y, train, config, streams.derive_seed(seed, streams.FOLD, i), data.tie_class
        )
        for i, (train, _) in enumerate(splits)
    )

    folds = []
    correct = 0
    for i, ((_, test), forest) in enumerate(zip(splits, forests)):
        if forest is None:
            logger.warning(
                f'{data.subject}: fold {i} has a single training class; '
                f'{len(test)} held-out trials counted as errors'
            )
        else:
            correct += int(
                accuracy_score(y[test], forest.predict_rows(X[test]), normalize=False)
            )
        folds.append(Fold(test=test, forest=forest))
    return CrossValidation(folds=tuple(folds), n=data.n, correct=correct)


def loo_accuracy(data: Dataset, config: ForestConfig, seed: int) -> float:
    """PE*: percent of held-out trials predicted correctly"""
    result = cross_validate(data, config, seed)
    logger.info(f'{data.subject}: PE* = {result.pe_star:.2f}%')
    return result.pe_star
